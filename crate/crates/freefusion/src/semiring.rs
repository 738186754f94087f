//! The fusion semiring over a free datum: nonnegative integer combinations of
//! words, with the product
//!
//! ```text
//! a_x · a_y = Σ_{x = v g, y = g* w} ( a_{v w} + a_{v ∘ w} )
//! ```
//!
//! summed over every splitting of `x` into `v g` and `y` into `g* w`; the
//! fusion term is dropped whenever `v ∘ w` is undefined. Coefficients are
//! arbitrary-precision, since multiplicities grow quickly with word length.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::datum::{FusionDatum, Letter};
use crate::word::Word;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SemiringError {
    #[error("elements belong to different fusion data")]
    DatumMismatch,
    #[error("word {0} is not valid for this datum")]
    InvalidWord(String),
}

/// A finitely supported map from words to positive coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemiringElement {
    datum: Arc<FusionDatum>,
    terms: BTreeMap<Word, BigUint>,
}

impl SemiringElement {
    pub fn zero(datum: Arc<FusionDatum>) -> Self {
        SemiringElement { datum, terms: BTreeMap::new() }
    }

    pub fn unit(datum: Arc<FusionDatum>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Word::empty(), BigUint::one());
        SemiringElement { datum, terms }
    }

    /// The basis element `a_w`.
    pub fn simple(datum: Arc<FusionDatum>, w: Word) -> Result<Self, SemiringError> {
        if !datum.word_valid(&w) {
            return Err(SemiringError::InvalidWord(w.to_string()));
        }
        let mut terms = BTreeMap::new();
        terms.insert(w, BigUint::one());
        Ok(SemiringElement { datum, terms })
    }

    pub fn datum(&self) -> &Arc<FusionDatum> {
        &self.datum
    }

    /// Terms in canonical word order, zero coefficients never stored.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigUint)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> BigUint {
        self.terms.get(w).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, w: Word, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(w).or_insert_with(BigUint::zero) += c;
    }

    pub fn add(&self, other: &Self) -> Result<Self, SemiringError> {
        if self.datum != other.datum {
            return Err(SemiringError::DatumMismatch);
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        if k.is_zero() {
            return SemiringElement::zero(self.datum.clone());
        }
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect();
        SemiringElement { datum: self.datum.clone(), terms }
    }

    /// Applies the word involution termwise. Anti-multiplicative: the dual of
    /// a product is the reversed product of the duals.
    pub fn dual(&self) -> Self {
        let terms =
            self.terms.iter().map(|(w, c)| (self.datum.word_dual(w), c.clone())).collect();
        SemiringElement { datum: self.datum.clone(), terms }
    }
}

/// The simple constituents of `a_x · a_y`, each with coefficient one.
///
/// Iterates the common segment `g` over suffixes of `x` whose dual is a
/// prefix of `y`. Distinct splittings produce words of distinct lengths, so
/// the result carries no repeated entries.
pub fn simple_product(d: &FusionDatum, x: &Word, y: &Word) -> Vec<Word> {
    let (xs, ys) = (x.letters(), y.letters());
    let mut out = Vec::new();
    for glen in 0..=xs.len().min(ys.len()) {
        let matches = (0..glen).all(|k| d.involve(xs[xs.len() - 1 - k]) == ys[k]);
        if !matches {
            continue;
        }
        let v = Word::from_letters(xs[..xs.len() - glen].to_vec());
        let w = Word::from_letters(ys[glen..].to_vec());
        if let Some(f) = d.word_fusion(&v, &w) {
            out.push(f);
        }
        out.push(v.concat(&w));
    }
    out
}

/// Bilinear extension of the free product rule.
pub fn product(a: &SemiringElement, b: &SemiringElement) -> Result<SemiringElement, SemiringError> {
    if a.datum != b.datum {
        return Err(SemiringError::DatumMismatch);
    }
    let mut out = SemiringElement::zero(a.datum.clone());
    for (x, cx) in &a.terms {
        for (y, cy) in &b.terms {
            let c = cx * cy;
            for w in simple_product(&a.datum, x, y) {
                out.insert(w, c.clone());
            }
        }
    }
    Ok(out)
}

/// Evidence that `lhs ≤ rhs` in the semiring order: `lhs + difference = rhs`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderWitness {
    pub lhs: SemiringElement,
    pub rhs: SemiringElement,
    pub difference: SemiringElement,
}

/// Compares coefficientwise; returns the witness difference when `a ≤ b`.
pub fn leq(a: &SemiringElement, b: &SemiringElement) -> Result<Option<OrderWitness>, SemiringError> {
    if a.datum != b.datum {
        return Err(SemiringError::DatumMismatch);
    }
    let mut difference = b.clone();
    for (w, ca) in &a.terms {
        let cb = difference.terms.get_mut(w);
        match cb {
            Some(cb) if *cb >= *ca => {
                *cb -= ca;
                if cb.is_zero() {
                    difference.terms.remove(w);
                }
            }
            _ => return Ok(None),
        }
    }
    debug_assert_eq!(a.add(&difference).unwrap(), *b);
    Ok(Some(OrderWitness { lhs: a.clone(), rhs: b.clone(), difference }))
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DimensionError {
    #[error("no dimension supplied for letter id {0}")]
    MissingLetter(i64),
    #[error("letter dimensions must respect duality (letter id {0})")]
    DualityMismatch(i64),
    #[error("letter dimensions must be positive (letter id {0})")]
    NonPositiveLetter(i64),
    #[error("inconsistent dimensions: word {0} would get a non-positive value")]
    Inconsistent(String),
}

/// Recursive dimension functional: `dim a_∅ = 1` and
/// `dim a_{x r} = dim(a_x)·dim(r) − Σ dims of the other constituents of
/// `a_x · a_r`. A consistency oracle: dimensions must stay positive and come
/// out multiplicative on products.
pub struct DimensionOracle<'a> {
    datum: &'a FusionDatum,
    letter_dims: BTreeMap<Letter, BigInt>,
    memo: BTreeMap<Word, BigInt>,
}

impl<'a> DimensionOracle<'a> {
    pub fn new(
        datum: &'a FusionDatum,
        letter_dims: &BTreeMap<Letter, u64>,
    ) -> Result<Self, DimensionError> {
        let mut dims = BTreeMap::new();
        for (&l, &d) in letter_dims {
            if d == 0 {
                return Err(DimensionError::NonPositiveLetter(l.id()));
            }
            let dual = datum.involve(l);
            match letter_dims.get(&dual) {
                Some(&dd) if dd == d => {}
                _ => return Err(DimensionError::DualityMismatch(l.id())),
            }
            dims.insert(l, BigInt::from(d));
        }
        Ok(DimensionOracle { datum, letter_dims: dims, memo: BTreeMap::new() })
    }

    pub fn word_dimension(&mut self, w: &Word) -> Result<BigUint, DimensionError> {
        let v = self.dim_word(w)?;
        Ok(v.to_biguint().expect("dimensions are kept positive"))
    }

    /// Additive extension to elements.
    pub fn element_dimension(&mut self, e: &SemiringElement) -> Result<BigUint, DimensionError> {
        let mut total = BigUint::zero();
        for (w, c) in e.terms() {
            total += self.word_dimension(w)? * c;
        }
        Ok(total)
    }

    fn dim_word(&mut self, w: &Word) -> Result<BigInt, DimensionError> {
        if let Some(v) = self.memo.get(w) {
            return Ok(v.clone());
        }
        let letters = w.letters();
        let value = if letters.is_empty() {
            BigInt::one()
        } else {
            let last = *letters.last().unwrap();
            let last_dim = self
                .letter_dims
                .get(&last)
                .cloned()
                .ok_or(DimensionError::MissingLetter(last.id()))?;
            let prefix = Word::from_letters(letters[..letters.len() - 1].to_vec());
            let r = Word::from_letters(vec![last]);
            let mut value = self.dim_word(&prefix)? * last_dim;
            for t in simple_product(self.datum, &prefix, &r) {
                if t != *w {
                    value -= self.dim_word(&t)?;
                }
            }
            value
        };
        if !value.is_positive() {
            return Err(DimensionError::Inconsistent(self.datum.format_word(w)));
        }
        self.memo.insert(w.clone(), value.clone());
        Ok(value)
    }
}

/// Convenience wrapper around [`DimensionOracle`] for a single word.
pub fn dimension(
    datum: &FusionDatum,
    w: &Word,
    letter_dims: &BTreeMap<Letter, u64>,
) -> Result<BigUint, DimensionError> {
    DimensionOracle::new(datum, letter_dims)?.word_dimension(w)
}

/// Empirical associativity diagnostic for data built in unchecked mode:
/// multiplies out all triples of words up to `max_len` and reports the first
/// counterexample.
pub fn associativity_probe(
    datum: &Arc<FusionDatum>,
    max_len: usize,
    range: Option<&std::ops::RangeInclusive<i64>>,
) -> Result<(), (Word, Word, Word)> {
    let words = datum
        .words_up_to(max_len, range)
        .expect("associativity probe needs an enumerable alphabet");
    let simples: Vec<SemiringElement> = words
        .iter()
        .map(|w| SemiringElement::simple(datum.clone(), w.clone()).unwrap())
        .collect();
    for (i, a) in simples.iter().enumerate() {
        for (j, b) in simples.iter().enumerate() {
            let ab = product(a, b).unwrap();
            for (k, c) in simples.iter().enumerate() {
                let left = product(&ab, c).unwrap();
                let right = product(a, &product(b, c).unwrap()).unwrap();
                if left != right {
                    return Err((words[i].clone(), words[j].clone(), words[k].clone()));
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for SemiringElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff_one = c.is_one();
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if coeff_one {
                write!(f, "{}", self.datum.format_word(w))?;
            } else {
                write!(f, "{c} {}", self.datum.format_word(w))?;
            }
        }
        Ok(())
    }
}

// Serializes as a sorted list of (word, coefficient) pairs.
impl Serialize for SemiringElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            seq.serialize_element(&(self.datum.format_word(w), c.to_string()))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::datum::FusionDatum;

    fn simple(d: &Arc<FusionDatum>, ids: &[i64]) -> SemiringElement {
        SemiringElement::simple(d.clone(), d.word(ids.iter().copied()).unwrap()).unwrap()
    }

    fn expected(d: &Arc<FusionDatum>, words: &[&[i64]]) -> SemiringElement {
        let mut out = SemiringElement::zero(d.clone());
        for ids in words {
            out = out.add(&simple(d, ids)).unwrap();
        }
        out
    }

    #[test]
    fn unitary_generator_times_its_dual() {
        let d = catalog::au();
        let got = product(&simple(&d, &[0]), &simple(&d, &[1])).unwrap();
        assert_eq!(got, expected(&d, &[&[], &[0, 1]]));
    }

    #[test]
    fn unitary_adjoint_squares() {
        let d = catalog::au();
        let adj = simple(&d, &[0, 1]);
        let got = product(&adj, &adj).unwrap();
        assert_eq!(got, expected(&d, &[&[], &[0, 1], &[0, 1, 0, 1]]));
    }

    #[test]
    fn automorphism_generator_squares() {
        let d = catalog::aaut();
        let r = simple(&d, &[0]);
        let got = product(&r, &r).unwrap();
        assert_eq!(got, expected(&d, &[&[], &[0], &[0, 0]]));
    }

    #[test]
    fn cyclic_distinct_letters_two_terms() {
        let d = FusionDatum::cyclic(5).unwrap();
        // x = 1, y = 2 (y != -x): a_1 a_2 = a_{1 2} + a_3
        let got = product(&simple(&d, &[1]), &simple(&d, &[2])).unwrap();
        assert_eq!(got, expected(&d, &[&[1, 2], &[3]]));
    }

    #[test]
    fn datum_mismatch_is_an_error() {
        let a = simple(&catalog::au(), &[0]);
        let b = simple(&catalog::bu(), &[0]);
        assert_eq!(product(&a, &b), Err(SemiringError::DatumMismatch));
    }

    #[test]
    fn dual_examples() {
        let d = catalog::au();
        let two = SemiringElement::unit(d.clone()).scale(&BigUint::from(2u32));
        assert_eq!(two.dual(), two);
        let got = simple(&d, &[0, 0]).scale(&BigUint::from(2u32)).dual();
        assert_eq!(got, simple(&d, &[1, 1]).scale(&BigUint::from(2u32)));
        let adj = simple(&d, &[0, 1]);
        assert_eq!(adj.dual(), adj);
    }

    #[test]
    fn order_witness_examples() {
        let d = catalog::au();
        let one = SemiringElement::unit(d.clone());
        let prod = product(&simple(&d, &[0]), &simple(&d, &[1])).unwrap();
        let w = leq(&one, &prod).unwrap().expect("1 <= a a*");
        assert_eq!(w.difference, simple(&d, &[0, 1]));

        let a = simple(&d, &[0]);
        let refl = leq(&a, &a).unwrap().expect("x <= x");
        assert!(refl.difference.is_zero());

        assert_eq!(leq(&simple(&d, &[0]), &simple(&d, &[1])).unwrap(), None);
    }

    #[test]
    fn dimension_examples() {
        // self-dual generator of dimension 2: dim a_{rr} = 2·2 - 1 = 3
        let bu = catalog::bu();
        let dims = [(bu.letter(0).unwrap(), 2u64)].into_iter().collect();
        assert_eq!(dimension(&bu, &bu.word([0, 0]).unwrap(), &dims), Ok(BigUint::from(3u32)));
        assert_eq!(dimension(&bu, &Word::empty(), &dims), Ok(BigUint::one()));

        // unitary datum with dim a = 3: dim a_{a a*} = 9 - 1 = 8
        let au = catalog::au();
        let dims = [(au.letter(0).unwrap(), 3u64), (au.letter(1).unwrap(), 3u64)]
            .into_iter()
            .collect();
        assert_eq!(dimension(&au, &au.word([0, 1]).unwrap(), &dims), Ok(BigUint::from(8u32)));
    }

    #[test]
    fn dimension_rejects_bad_letter_data() {
        let au = catalog::au();
        let lopsided = [(au.letter(0).unwrap(), 3u64), (au.letter(1).unwrap(), 2u64)]
            .into_iter()
            .collect();
        assert!(matches!(
            dimension(&au, &Word::empty(), &lopsided),
            Err(DimensionError::DualityMismatch(_))
        ));
        // dim a = 1 makes dim a_{a a*} = 0
        let ones = [(au.letter(0).unwrap(), 1u64), (au.letter(1).unwrap(), 1u64)]
            .into_iter()
            .collect();
        assert!(matches!(
            dimension(&au, &au.word([0, 1]).unwrap(), &ones),
            Err(DimensionError::Inconsistent(_))
        ));
    }

    fn catalog_datums() -> Vec<Arc<FusionDatum>> {
        vec![
            catalog::au(),
            catalog::bu(),
            catalog::aaut(),
            FusionDatum::cyclic(2).unwrap(),
            FusionDatum::cyclic(3).unwrap(),
        ]
    }

    #[test]
    fn products_are_associative_at_bounded_length() {
        for d in catalog_datums() {
            assert_eq!(associativity_probe(&d, 3, None), Ok(()));
        }
    }

    #[test]
    fn probe_detects_non_associative_fusion() {
        // a∘a = b and a∘b = c, with b∘a undefined: fails the datum axioms and
        // breaks associativity of the product at single letters.
        let d = FusionDatum::table_unchecked(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0, 1, 2],
            [((0, 0), 1), ((0, 1), 2)].into_iter().collect(),
        )
        .unwrap();
        assert!(d.validate().is_err());
        let witness = associativity_probe(&d, 1, None).unwrap_err();
        assert_eq!(witness.0.len().max(witness.1.len()).max(witness.2.len()), 1);
    }

    #[test]
    fn unit_is_neutral() {
        for d in catalog_datums() {
            let one = SemiringElement::unit(d.clone());
            for w in d.words_up_to(3, None).unwrap() {
                let a = SemiringElement::simple(d.clone(), w).unwrap();
                assert_eq!(product(&one, &a).unwrap(), a);
                assert_eq!(product(&a, &one).unwrap(), a);
            }
        }
    }

    #[test]
    fn dual_is_anti_multiplicative() {
        for d in catalog_datums() {
            let words = d.words_up_to(3, None).unwrap();
            for x in &words {
                for y in &words {
                    let a = SemiringElement::simple(d.clone(), x.clone()).unwrap();
                    let b = SemiringElement::simple(d.clone(), y.clone()).unwrap();
                    assert_eq!(
                        product(&a, &b).unwrap().dual(),
                        product(&b.dual(), &a.dual()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn extended_products_dominate() {
        // a_{x'} a_{y'} <= a_{x' t} a_{t* y'} for all short words.
        for d in [catalog::au(), FusionDatum::cyclic(3).unwrap()] {
            let words = d.words_up_to(3, None).unwrap();
            for xp in &words {
                for yp in &words {
                    for t in &words {
                        let small = product(
                            &SemiringElement::simple(d.clone(), xp.clone()).unwrap(),
                            &SemiringElement::simple(d.clone(), yp.clone()).unwrap(),
                        )
                        .unwrap();
                        let x = xp.concat(t);
                        let y = d.word_dual(t).concat(yp);
                        let big = product(
                            &SemiringElement::simple(d.clone(), x).unwrap(),
                            &SemiringElement::simple(d.clone(), y).unwrap(),
                        )
                        .unwrap();
                        assert!(leq(&small, &big).unwrap().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn unit_coefficient_detects_duality() {
        for d in catalog_datums() {
            for x in d.words_up_to(4, None).unwrap() {
                for y in d.words_up_to(4, None).unwrap() {
                    let p = product(
                        &SemiringElement::simple(d.clone(), x.clone()).unwrap(),
                        &SemiringElement::simple(d.clone(), y.clone()).unwrap(),
                    )
                    .unwrap();
                    let expect = if y == d.word_dual(&x) { BigUint::one() } else { BigUint::zero() };
                    assert_eq!(p.coefficient(&Word::empty()), expect, "{x} {y}");
                }
            }
        }
    }

    #[test]
    fn no_nontrivial_invertibles() {
        for d in catalog_datums() {
            for w in d.words_up_to(4, None).unwrap() {
                if w.is_empty() {
                    continue;
                }
                let a = SemiringElement::simple(d.clone(), w.clone()).unwrap();
                let p = product(&a, &a.dual()).unwrap();
                assert!(p.support_len() >= 2);
                assert!(!p.coefficient(&w.concat(&d.word_dual(&w))).is_zero());
            }
        }
    }

    #[test]
    fn dimension_is_multiplicative_on_simples() {
        let cases = [(catalog::bu(), 2u64), (catalog::au(), 3u64)];
        for (d, gen_dim) in cases {
            let dims: BTreeMap<Letter, u64> =
                d.letters().unwrap().into_iter().map(|l| (l, gen_dim)).collect();
            let mut oracle = DimensionOracle::new(&d, &dims).unwrap();
            let words = d.words_up_to(3, None).unwrap();
            for x in &words {
                for y in &words {
                    let a = SemiringElement::simple(d.clone(), x.clone()).unwrap();
                    let b = SemiringElement::simple(d.clone(), y.clone()).unwrap();
                    let lhs = oracle.element_dimension(&product(&a, &b).unwrap()).unwrap();
                    let rhs = oracle.word_dimension(x).unwrap() * oracle.word_dimension(y).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn display_is_canonical() {
        let d = catalog::au();
        let e = product(&simple(&d, &[0]), &simple(&d, &[1])).unwrap();
        assert_eq!(e.to_string(), "1 + [a a*]");
        assert_eq!(SemiringElement::zero(d.clone()).to_string(), "0");
        assert_eq!(simple(&d, &[0]).scale(&BigUint::from(2u32)).to_string(), "2 [a]");
    }

    #[test]
    fn elements_serialize_as_sorted_pairs() {
        let d = catalog::au();
        let e = product(&simple(&d, &[0]), &simple(&d, &[1])).unwrap();
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(json, serde_json::json!([["[]", "1"], ["[a a*]", "1"]]));
    }
}
