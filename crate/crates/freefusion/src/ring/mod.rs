//! A uniform interface over fusion rings: enumerable simples, unit, dual,
//! and pairwise product decomposition.
//!
//! Four backends: free-datum rings (simples are words), finite group rings
//! (simples are grouplikes), finite fusion tables (explicit structure
//! constants), and free products of any of these. Free-product simples are
//! alternating strings of nontrivial factor simples; their products follow
//! the concatenate / substitute / recurse case analysis, recursing when the
//! boundary entries are dual to each other.

mod group;
mod letters;
mod table;

pub use group::{cyclic_group, klein_group, GroupLoadError, GroupTable, GroupTableError};
pub use letters::{LetterAddr, LetterSpace};
pub use table::{rep_s3, FusionTable, FusionTableError, TableLoadError};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::datum::FusionDatum;
use crate::semiring;
use crate::word::Word;

pub type LetterRange = RangeInclusive<i64>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("`{0}` is not a simple of this ring")]
    NotASimple(String),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("a free product needs at least one factor")]
    EmptyFreeProduct,
    #[error("the alphabet is infinite; supply a letter range")]
    UnboundedAlphabet,
    #[error("free-product recursion exceeded its depth guard (internal defect)")]
    RecursionGuard,
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("free-product factors must have finite alphabets here")]
    InfiniteFactor,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Backend {
    FreeDatum(Arc<FusionDatum>),
    FiniteGroup(Arc<GroupTable>),
    FiniteTable(Arc<FusionTable>),
    FreeProduct(Arc<Vec<RingHandle>>),
}

/// A fusion ring with one of the four backends.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingHandle {
    backend: Backend,
}

/// A simple (irreducible) of a ring.
///
/// `String` entries pair a factor index with a nontrivial simple of that
/// factor; consecutive entries come from distinct factors, and the empty
/// string is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Simple {
    Word(Word),
    Element(usize),
    Irrep(usize),
    String(Vec<(usize, Simple)>),
}

impl RingHandle {
    pub fn free_datum(datum: Arc<FusionDatum>) -> Self {
        RingHandle { backend: Backend::FreeDatum(datum) }
    }

    pub fn finite_group(table: Arc<GroupTable>) -> Self {
        RingHandle { backend: Backend::FiniteGroup(table) }
    }

    pub fn finite_table(table: Arc<FusionTable>) -> Self {
        RingHandle { backend: Backend::FiniteTable(table) }
    }

    /// Free product of the given rings. Nested free products are flattened
    /// (the construction is associative).
    pub fn free_product(factors: Vec<RingHandle>) -> Result<Self, RingError> {
        if factors.is_empty() {
            return Err(RingError::EmptyFreeProduct);
        }
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f.backend {
                Backend::FreeProduct(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(f),
            }
        }
        Ok(RingHandle { backend: Backend::FreeProduct(Arc::new(flat)) })
    }

    pub fn as_free_datum(&self) -> Option<&Arc<FusionDatum>> {
        match &self.backend {
            Backend::FreeDatum(d) => Some(d),
            _ => None,
        }
    }

    pub fn as_finite_group(&self) -> Option<&Arc<GroupTable>> {
        match &self.backend {
            Backend::FiniteGroup(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_finite_table(&self) -> Option<&Arc<FusionTable>> {
        match &self.backend {
            Backend::FiniteTable(t) => Some(t),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<&[RingHandle]> {
        match &self.backend {
            Backend::FreeProduct(fs) => Some(fs),
            _ => None,
        }
    }

    pub fn unit(&self) -> Simple {
        match &self.backend {
            Backend::FreeDatum(_) => Simple::Word(Word::empty()),
            Backend::FiniteGroup(g) => Simple::Element(g.identity()),
            Backend::FiniteTable(_) => Simple::Irrep(FusionTable::UNIT),
            Backend::FreeProduct(_) => Simple::String(Vec::new()),
        }
    }

    pub fn is_valid_simple(&self, s: &Simple) -> bool {
        match (&self.backend, s) {
            (Backend::FreeDatum(d), Simple::Word(w)) => d.word_valid(w),
            (Backend::FiniteGroup(g), Simple::Element(i)) => *i < g.order(),
            (Backend::FiniteTable(t), Simple::Irrep(i)) => *i < t.len(),
            (Backend::FreeProduct(fs), Simple::String(entries)) => {
                entries.iter().enumerate().all(|(k, (f, e))| {
                    *f < fs.len()
                        && fs[*f].is_valid_simple(e)
                        && *e != fs[*f].unit()
                        && (k == 0 || entries[k - 1].0 != *f)
                })
            }
            _ => false,
        }
    }

    /// Word length for free-datum simples, total entry length for strings,
    /// and 0/1 for finite backends (0 only for the unit).
    pub fn simple_len(&self, s: &Simple) -> usize {
        match (&self.backend, s) {
            (Backend::FreeDatum(_), Simple::Word(w)) => w.len(),
            (Backend::FiniteGroup(g), Simple::Element(i)) => usize::from(*i != g.identity()),
            (Backend::FiniteTable(_), Simple::Irrep(i)) => usize::from(*i != FusionTable::UNIT),
            (Backend::FreeProduct(fs), Simple::String(entries)) => {
                entries.iter().map(|(f, e)| fs[*f].simple_len(e)).sum()
            }
            _ => 0,
        }
    }

    /// The dual simple: reversed word/string with letterwise or entrywise
    /// duals, or the group inverse.
    pub fn dual_simple(&self, s: &Simple) -> Result<Simple, RingError> {
        self.check_simple(s)?;
        Ok(match (&self.backend, s) {
            (Backend::FreeDatum(d), Simple::Word(w)) => Simple::Word(d.word_dual(w)),
            (Backend::FiniteGroup(g), Simple::Element(i)) => Simple::Element(g.inverse(*i)),
            (Backend::FiniteTable(t), Simple::Irrep(i)) => Simple::Irrep(t.dual(*i)),
            (Backend::FreeProduct(fs), Simple::String(entries)) => Simple::String(
                entries
                    .iter()
                    .rev()
                    .map(|(f, e)| fs[*f].dual_simple(e).map(|d| (*f, d)))
                    .collect::<Result<_, _>>()?,
            ),
            _ => unreachable!("check_simple verified the variant"),
        })
    }

    fn check_simple(&self, s: &Simple) -> Result<(), RingError> {
        if self.is_valid_simple(s) {
            Ok(())
        } else {
            Err(RingError::NotASimple(format!("{s:?}")))
        }
    }

    /// Full decomposition of the product of two simples.
    pub fn product(&self, x: &Simple, y: &Simple) -> Result<RingElement, RingError> {
        self.check_simple(x)?;
        self.check_simple(y)?;
        match (&self.backend, x, y) {
            (Backend::FreeDatum(d), Simple::Word(wx), Simple::Word(wy)) => {
                let mut out = RingElement::zero(self.clone());
                for w in semiring::simple_product(d, wx, wy) {
                    out.insert(Simple::Word(w), BigUint::one());
                }
                Ok(out)
            }
            (Backend::FiniteGroup(g), Simple::Element(a), Simple::Element(b)) => {
                let mut out = RingElement::zero(self.clone());
                out.insert(Simple::Element(g.mul(*a, *b)), BigUint::one());
                Ok(out)
            }
            (Backend::FiniteTable(t), Simple::Irrep(a), Simple::Irrep(b)) => {
                let mut out = RingElement::zero(self.clone());
                for (z, c) in t.product(*a, *b) {
                    out.insert(Simple::Irrep(z), c);
                }
                Ok(out)
            }
            (Backend::FreeProduct(fs), Simple::String(ex), Simple::String(ey)) => {
                let budget = ex.len() + ey.len() + 2;
                self.fp_product(fs, ex, ey, 0, budget)
            }
            _ => unreachable!("check_simple verified the variants"),
        }
    }

    fn fp_product(
        &self,
        factors: &[RingHandle],
        x: &[(usize, Simple)],
        y: &[(usize, Simple)],
        depth: usize,
        budget: usize,
    ) -> Result<RingElement, RingError> {
        if depth > budget {
            return Err(RingError::RecursionGuard);
        }
        let mut out = RingElement::zero(self.clone());
        if x.is_empty() || y.is_empty() {
            let s = if x.is_empty() { y } else { x };
            out.insert(Simple::String(s.to_vec()), BigUint::one());
            return Ok(out);
        }
        let (i, xn) = x.last().unwrap();
        let (j, y1) = y.first().unwrap();
        if i != j {
            // distinct boundary factors: plain concatenation
            let entries: Vec<_> = x.iter().chain(y.iter()).cloned().collect();
            out.insert(Simple::String(entries), BigUint::one());
            return Ok(out);
        }
        // same factor: decompose the boundary product inside that factor;
        // nontrivial constituents substitute in place, the unit constituent
        // (present exactly when y1 = xn*) strips both entries and recurses
        let inner = factors[*i].product(xn, y1)?;
        let factor_unit = factors[*i].unit();
        for (v, n) in inner.terms() {
            if *v == factor_unit {
                let rec =
                    self.fp_product(factors, &x[..x.len() - 1], &y[1..], depth + 1, budget)?;
                out.add_scaled(&rec, n);
            } else {
                let mut entries = Vec::with_capacity(x.len() + y.len() - 1);
                entries.extend_from_slice(&x[..x.len() - 1]);
                entries.push((*i, v.clone()));
                entries.extend_from_slice(&y[1..]);
                out.insert(Simple::String(entries), n.clone());
            }
        }
        Ok(out)
    }

    /// All simples of length at most `max_len`, in canonical order.
    ///
    /// `range` bounds letter ids and is required when an underlying alphabet
    /// is infinite.
    pub fn enumerate_simples(
        &self,
        max_len: usize,
        range: Option<&LetterRange>,
    ) -> Result<Vec<Simple>, RingError> {
        match &self.backend {
            Backend::FreeDatum(d) => {
                let words = d.words_up_to(max_len, range).ok_or(RingError::UnboundedAlphabet)?;
                Ok(words.into_iter().map(Simple::Word).collect())
            }
            Backend::FiniteGroup(g) => {
                let mut out = vec![self.unit()];
                if max_len >= 1 {
                    out.extend((0..g.order()).filter(|&i| i != g.identity()).map(Simple::Element));
                }
                Ok(out)
            }
            Backend::FiniteTable(t) => {
                let mut out = vec![self.unit()];
                if max_len >= 1 {
                    out.extend((1..t.len()).map(Simple::Irrep));
                }
                Ok(out)
            }
            Backend::FreeProduct(fs) => {
                // nontrivial factor simples bucketed by exact length
                let mut buckets: Vec<Vec<Vec<Simple>>> = Vec::with_capacity(fs.len());
                for f in fs.iter() {
                    let mut by_len: Vec<Vec<Simple>> = vec![Vec::new(); max_len + 1];
                    for s in f.enumerate_simples(max_len, range)? {
                        let l = f.simple_len(&s);
                        if l >= 1 {
                            by_len[l].push(s);
                        }
                    }
                    buckets.push(by_len);
                }
                let mut out = vec![self.unit()];
                let mut stack: Vec<(usize, Simple)> = Vec::new();
                fn extend(
                    buckets: &[Vec<Vec<Simple>>],
                    stack: &mut Vec<(usize, Simple)>,
                    remaining: usize,
                    out: &mut Vec<Simple>,
                ) {
                    for (f, by_len) in buckets.iter().enumerate() {
                        if stack.last().is_some_and(|(lf, _)| *lf == f) {
                            continue;
                        }
                        for (l, entries) in by_len.iter().enumerate().take(remaining + 1).skip(1) {
                            for s in entries {
                                stack.push((f, s.clone()));
                                out.push(Simple::String(stack.clone()));
                                extend(buckets, stack, remaining - l, out);
                                stack.pop();
                            }
                        }
                    }
                }
                extend(&buckets, &mut stack, max_len, &mut out);
                out.sort_by(|a, b| self.canonical_cmp(a, b));
                Ok(out)
            }
        }
    }

    /// Canonical total order: length first, then structure.
    pub fn canonical_cmp(&self, a: &Simple, b: &Simple) -> Ordering {
        self.simple_len(a).cmp(&self.simple_len(b)).then_with(|| match (&self.backend, a, b) {
            (Backend::FreeProduct(fs), Simple::String(ea), Simple::String(eb)) => {
                for ((fa, sa), (fb, sb)) in ea.iter().zip(eb.iter()) {
                    let ord = fa.cmp(fb).then_with(|| fs[*fa].canonical_cmp(sa, sb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                ea.len().cmp(&eb.len())
            }
            _ => a.cmp(b),
        })
    }
}

/// A finitely supported nonnegative-integer combination of simples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    ring: RingHandle,
    terms: BTreeMap<Simple, BigUint>,
}

impl RingElement {
    pub fn zero(ring: RingHandle) -> Self {
        RingElement { ring, terms: BTreeMap::new() }
    }

    pub fn unit(ring: RingHandle) -> Self {
        let u = ring.unit();
        let mut terms = BTreeMap::new();
        terms.insert(u, BigUint::one());
        RingElement { ring, terms }
    }

    pub fn simple(ring: RingHandle, s: Simple) -> Result<Self, RingError> {
        ring.check_simple(&s)?;
        let mut terms = BTreeMap::new();
        terms.insert(s, BigUint::one());
        Ok(RingElement { ring, terms })
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simple, &BigUint)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, s: &Simple) -> BigUint {
        self.terms.get(s).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, s: Simple, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(s).or_insert_with(BigUint::zero) += c;
    }

    fn add_scaled(&mut self, other: &Self, k: &BigUint) {
        for (s, c) in &other.terms {
            self.insert(s.clone(), c * k);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        let mut out = self.clone();
        out.add_scaled(other, &BigUint::one());
        Ok(out)
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        if k.is_zero() {
            return RingElement::zero(self.ring.clone());
        }
        let terms = self.terms.iter().map(|(s, c)| (s.clone(), c * k)).collect();
        RingElement { ring: self.ring.clone(), terms }
    }

    /// Bilinear extension of the simple-pair product.
    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch);
        }
        let mut out = RingElement::zero(self.ring.clone());
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let p = self.ring.product(x, y)?;
                out.add_scaled(&p, &(cx * cy));
            }
        }
        Ok(out)
    }

    pub fn dual(&self) -> Result<Self, RingError> {
        let mut out = RingElement::zero(self.ring.clone());
        for (s, c) in &self.terms {
            out.insert(self.ring.dual_simple(s)?, c.clone());
        }
        Ok(out)
    }

    /// Terms sorted in the ring's canonical order.
    pub fn sorted_terms(&self) -> Vec<(&Simple, &BigUint)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.canonical_cmp(a.0, b.0));
        v
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let space = self.ring.letter_space();
        let unit = self.ring.unit();
        for (i, (s, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *s == unit {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", space.format_simple(&self.ring, s))?;
            } else {
                write!(f, "{c} {}", space.format_simple(&self.ring, s))?;
            }
        }
        Ok(())
    }
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let space = self.ring.letter_space();
        let sorted = self.sorted_terms();
        let mut seq = serializer.serialize_seq(Some(sorted.len()))?;
        for (s, c) in sorted {
            seq.serialize_element(&(space.format_simple(&self.ring, s), c.to_string()))?;
        }
        seq.end()
    }
}

/// Outcome of comparing the two constructions of a free-product fusion ring.
#[derive(Clone, Debug, Serialize)]
pub enum ConsistencyReport {
    Agree { pairs_checked: usize },
    Mismatch(Box<FreeProductMismatch>),
}

#[derive(Clone, Debug, Serialize)]
pub struct FreeProductMismatch {
    pub x: String,
    pub y: String,
    pub via_union_datum: Vec<(String, String)>,
    pub via_string_recursion: Vec<(String, String)>,
}

/// Builds the free-datum ring on the disjoint-union datum and the
/// free-product backend over the factor rings, then verifies that both
/// decompose every pair of simples up to `max_len` identically under the
/// string-to-word translation.
pub fn free_product_consistency(
    data: &[Arc<FusionDatum>],
    max_len: usize,
) -> Result<ConsistencyReport, RingError> {
    let mut offsets = Vec::with_capacity(data.len());
    let mut names = Vec::new();
    for d in data {
        offsets.push(names.len());
        let letters = d.letters().ok_or(RingError::InfiniteFactor)?;
        let fi = offsets.len() - 1;
        names.extend(letters.iter().map(|&l| format!("{fi}.{}", d.letter_name(l))));
    }
    let mut involution = vec![0usize; names.len()];
    let mut fusion = BTreeMap::new();
    for (fi, d) in data.iter().enumerate() {
        let letters = d.letters().expect("checked finite above");
        let local = |l: crate::datum::Letter| -> usize {
            letters.iter().position(|&x| x == l).expect("letter of this datum")
        };
        for &a in &letters {
            involution[offsets[fi] + local(a)] = offsets[fi] + local(d.involve(a));
            for &b in &letters {
                if let Some(c) = d.fuse(a, b) {
                    fusion.insert(
                        (offsets[fi] + local(a), offsets[fi] + local(b)),
                        offsets[fi] + local(c),
                    );
                }
            }
        }
    }
    let union = FusionDatum::table(names, involution, fusion)
        .expect("disjoint union of valid data is valid");
    let union_ring = RingHandle::free_datum(union.clone());

    let factor_rings: Vec<RingHandle> =
        data.iter().map(|d| RingHandle::free_datum(d.clone())).collect();
    let product_ring = RingHandle::free_product(factor_rings)?;

    let translate = |s: &Simple| -> Word {
        let Simple::String(entries) = s else { panic!("free-product simples are strings") };
        let mut ids = Vec::new();
        for (fi, e) in entries {
            let Simple::Word(w) = e else { panic!("factors here are free-datum rings") };
            let letters = data[*fi].letters().expect("finite");
            for l in w.letters() {
                let local = letters.iter().position(|x| x == l).expect("letter of factor");
                ids.push((offsets[*fi] + local) as i64);
            }
        }
        union.word(ids).expect("translated word is valid")
    };
    let render = |e: &RingElement| -> Vec<(String, String)> {
        e.sorted_terms()
            .into_iter()
            .map(|(s, c)| (e.ring().letter_space().format_simple(e.ring(), s), c.to_string()))
            .collect()
    };

    let simples = product_ring.enumerate_simples(max_len, None)?;
    let mut pairs_checked = 0;
    for x in &simples {
        for y in &simples {
            let via_strings = product_ring.product(x, y)?;
            let mut translated: BTreeMap<Word, BigUint> = BTreeMap::new();
            for (s, c) in via_strings.terms() {
                *translated.entry(translate(s)).or_insert_with(BigUint::zero) += c;
            }
            let wx = semiring::SemiringElement::simple(union.clone(), translate(x))
                .expect("valid word");
            let wy = semiring::SemiringElement::simple(union.clone(), translate(y))
                .expect("valid word");
            let via_datum = semiring::product(&wx, &wy).expect("same datum");
            let datum_terms: BTreeMap<Word, BigUint> =
                via_datum.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
            if translated != datum_terms {
                let space = union_ring.letter_space();
                let datum_render = datum_terms
                    .iter()
                    .map(|(w, c)| {
                        (space.format_simple(&union_ring, &Simple::Word(w.clone())), c.to_string())
                    })
                    .collect();
                let ls = product_ring.letter_space();
                return Ok(ConsistencyReport::Mismatch(Box::new(FreeProductMismatch {
                    x: ls.format_simple(&product_ring, x),
                    y: ls.format_simple(&product_ring, y),
                    via_union_datum: datum_render,
                    via_string_recursion: render(&via_strings),
                })));
            }
            pairs_checked += 1;
        }
    }
    Ok(ConsistencyReport::Agree { pairs_checked })
}
