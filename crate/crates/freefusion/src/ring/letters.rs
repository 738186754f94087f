//! The flat letter namespace of a ring: every word literal in the expression
//! language is a sequence of letter names, resolved here.
//!
//! For a single-backend ring the names are the datum's letter names (or
//! residues for cyclic data, element names for groups, simple names for
//! tables). In a free product the factors' namespaces are merged; colliding
//! names are renamed deterministically — single-letter names advance through
//! the alphabet (`r` in a second factor becomes `s`), anything else gets a
//! `#<factor>` suffix, and at most one cyclic factor keeps bare residues.

use std::collections::BTreeMap;

use super::{Backend, RingHandle, Simple};
use crate::datum::Letter;

/// Where a letter name points inside a (possibly free-product) ring.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LetterAddr {
    DatumLetter { factor: usize, letter: Letter },
    GroupElement { factor: usize, index: usize },
    TableSimple { factor: usize, index: usize },
}

#[derive(Clone, Debug)]
enum FactorNames {
    /// Renamed finite names, indexed like the factor's letters/elements/simples.
    Named(Vec<String>),
    /// A cyclic factor: bare residues, or residues suffixed with `#factor`.
    Numeric { suffix: Option<String> },
}

#[derive(Clone, Debug)]
pub struct LetterSpace {
    named: BTreeMap<String, LetterAddr>,
    factors: Vec<FactorNames>,
    /// Factor index owning the bare-residue namespace, if any.
    bare_numeric: Option<usize>,
}

fn successor_names(name: &str) -> Vec<String> {
    let mut chars = name.chars();
    let (first, rest) = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => (c, chars.as_str()),
        _ => return Vec::new(),
    };
    if !(rest.is_empty() || rest == "*") {
        return Vec::new();
    }
    ((first as u8 + 1)..=b'z').map(|c| format!("{}{rest}", c as char)).collect()
}

impl RingHandle {
    /// Builds the letter namespace for this ring.
    pub fn letter_space(&self) -> LetterSpace {
        let factors: Vec<&RingHandle> = match &self.backend {
            Backend::FreeProduct(fs) => fs.iter().collect(),
            _ => vec![self],
        };
        let mut named = BTreeMap::new();
        let mut factor_names = Vec::with_capacity(factors.len());
        let mut numeric_factors = Vec::new();
        for (fi, fac) in factors.iter().enumerate() {
            let raw: Option<Vec<(String, LetterAddr)>> = match &fac.backend {
                Backend::FreeDatum(d) if d.is_cyclic() => None,
                Backend::FreeDatum(d) => Some(
                    d.letters()
                        .expect("table alphabets are finite")
                        .into_iter()
                        .map(|l| {
                            (d.letter_name(l), LetterAddr::DatumLetter { factor: fi, letter: l })
                        })
                        .collect(),
                ),
                Backend::FiniteGroup(g) => Some(
                    g.names()
                        .iter()
                        .enumerate()
                        .map(|(i, n)| {
                            (n.clone(), LetterAddr::GroupElement { factor: fi, index: i })
                        })
                        .collect(),
                ),
                Backend::FiniteTable(t) => Some(
                    t.names()
                        .iter()
                        .enumerate()
                        .map(|(i, n)| (n.clone(), LetterAddr::TableSimple { factor: fi, index: i }))
                        .collect(),
                ),
                Backend::FreeProduct(_) => unreachable!("free products are flattened"),
            };
            match raw {
                None => {
                    numeric_factors.push(fi);
                    factor_names.push(FactorNames::Numeric { suffix: None });
                }
                Some(entries) => {
                    let mut chosen = Vec::with_capacity(entries.len());
                    for (name, addr) in entries {
                        let mut candidate = name.clone();
                        if named.contains_key(&candidate) {
                            candidate = successor_names(&name)
                                .into_iter()
                                .find(|c| !named.contains_key(c))
                                .unwrap_or_else(|| {
                                    let mut c = format!("{name}#{fi}");
                                    while named.contains_key(&c) {
                                        c.push('\'');
                                    }
                                    c
                                });
                        }
                        named.insert(candidate.clone(), addr);
                        chosen.push(candidate);
                    }
                    factor_names.push(FactorNames::Named(chosen));
                }
            }
        }
        // The bare-residue namespace goes to the first cyclic factor, unless
        // some finite name is itself an integer.
        let names_shadow_numbers = named.keys().any(|n| n.parse::<i64>().is_ok());
        let mut bare_numeric = None;
        for (k, &fi) in numeric_factors.iter().enumerate() {
            let suffix = if k == 0 && !names_shadow_numbers {
                bare_numeric = Some(fi);
                None
            } else {
                Some(format!("#{fi}"))
            };
            factor_names[fi] = FactorNames::Numeric { suffix };
        }
        LetterSpace { named, factors: factor_names, bare_numeric }
    }
}

impl LetterSpace {
    /// Resolves a letter name to its address, if any.
    pub fn resolve(&self, ring: &RingHandle, name: &str) -> Option<LetterAddr> {
        if let Some(addr) = self.named.get(name) {
            return Some(*addr);
        }
        let (digits, factor) = match name.split_once('#') {
            Some((digits, suffix)) => (digits, suffix.parse::<usize>().ok()?),
            None => (name, self.bare_numeric?),
        };
        let id: i64 = digits.parse().ok()?;
        if !matches!(self.factors.get(factor)?, FactorNames::Numeric { suffix }
            if name.split_once('#').map(|(_, s)| format!("#{s}")) == *suffix
                || (suffix.is_none() && !name.contains('#')))
        {
            return None;
        }
        let fac = factor_handle(ring, factor)?;
        let d = fac.as_free_datum()?;
        Some(LetterAddr::DatumLetter { factor, letter: d.letter(id).ok()? })
    }

    fn letter_display(&self, factor: usize, letter: Letter, index: Option<usize>) -> String {
        match &self.factors[factor] {
            FactorNames::Named(names) => {
                let i = index.unwrap_or(letter.id() as usize);
                names.get(i).cloned().unwrap_or_else(|| format!("?{i}"))
            }
            FactorNames::Numeric { suffix } => match suffix {
                Some(s) => format!("{}{s}", letter.id()),
                None => letter.id().to_string(),
            },
        }
    }

    fn push_entry_names(
        &self,
        ring: &RingHandle,
        factor: usize,
        entry: &Simple,
        out: &mut Vec<String>,
    ) {
        match entry {
            Simple::Word(w) => {
                for &l in w.letters() {
                    out.push(self.letter_display(factor, l, None));
                }
            }
            Simple::Element(i) | Simple::Irrep(i) => {
                out.push(self.letter_display(factor, Letter::raw(*i as i64), Some(*i)));
            }
            Simple::String(_) => {
                let _ = ring;
                out.push("?".into());
            }
        }
    }

    /// Renders a simple as a word literal, e.g. `[r s r]`; the unit is `[]`.
    pub fn format_simple(&self, ring: &RingHandle, s: &Simple) -> String {
        let mut parts = Vec::new();
        match s {
            Simple::String(entries) => {
                for (f, e) in entries {
                    self.push_entry_names(ring, *f, e, &mut parts);
                }
            }
            other => self.push_entry_names(ring, 0, other, &mut parts),
        }
        format!("[{}]", parts.join(" "))
    }

    /// All finite letter names in this namespace, with their addresses.
    pub fn names(&self) -> impl Iterator<Item = (&String, &LetterAddr)> {
        self.named.iter()
    }

    pub fn has_numeric_letters(&self) -> bool {
        self.factors.iter().any(|f| matches!(f, FactorNames::Numeric { .. }))
    }
}

fn factor_handle(ring: &RingHandle, factor: usize) -> Option<&RingHandle> {
    match &ring.backend {
        Backend::FreeProduct(fs) => fs.get(factor),
        _ if factor == 0 => Some(ring),
        _ => None,
    }
}

impl RingHandle {
    /// Interprets a sequence of letter addresses as a simple: consecutive
    /// letters of one factor concatenate into a word (or multiply, for a
    /// group factor); runs from distinct factors become string entries.
    ///
    /// Unit entries (empty factor runs, the identity, the unit simple) are
    /// dropped. If dropping one exposes two adjacent runs of the same
    /// factor, the sequence does not name a simple and an error is returned.
    pub fn simple_from_letters(&self, addrs: &[LetterAddr]) -> Result<Simple, super::RingError> {
        use super::RingError;
        let not_a_simple =
            |msg: &str| RingError::NotASimple(msg.to_owned());
        // group into maximal same-factor runs
        let mut runs: Vec<(usize, Vec<LetterAddr>)> = Vec::new();
        for &a in addrs {
            let f = match a {
                LetterAddr::DatumLetter { factor, .. }
                | LetterAddr::GroupElement { factor, .. }
                | LetterAddr::TableSimple { factor, .. } => factor,
            };
            match runs.last_mut() {
                Some((lf, run)) if *lf == f => run.push(a),
                _ => runs.push((f, vec![a])),
            }
        }
        let mut entries: Vec<(usize, Simple)> = Vec::new();
        for (f, run) in runs {
            let fac = factor_handle(self, f).ok_or_else(|| not_a_simple("bad factor index"))?;
            let entry = match &fac.backend {
                Backend::FreeDatum(d) => {
                    let mut letters = Vec::with_capacity(run.len());
                    for a in &run {
                        let LetterAddr::DatumLetter { letter, .. } = a else {
                            return Err(not_a_simple("letter does not belong to this factor"));
                        };
                        letters.push(letter.id());
                    }
                    Simple::Word(d.word(letters).map_err(|e| not_a_simple(&e.to_string()))?)
                }
                Backend::FiniteGroup(g) => {
                    let mut acc = g.identity();
                    for a in &run {
                        let LetterAddr::GroupElement { index, .. } = a else {
                            return Err(not_a_simple("letter does not belong to this factor"));
                        };
                        acc = g.mul(acc, *index);
                    }
                    Simple::Element(acc)
                }
                Backend::FiniteTable(_) => {
                    if run.len() != 1 {
                        return Err(not_a_simple(
                            "juxtaposed table simples do not name a simple; use `*`",
                        ));
                    }
                    let LetterAddr::TableSimple { index, .. } = run[0] else {
                        return Err(not_a_simple("letter does not belong to this factor"));
                    };
                    Simple::Irrep(index)
                }
                Backend::FreeProduct(_) => unreachable!("free products are flattened"),
            };
            if entry == fac.unit() {
                continue;
            }
            if let Some((lf, _)) = entries.last() {
                if *lf == f {
                    return Err(not_a_simple(
                        "a trivial entry exposed two runs of the same factor; \
                         the result is not a simple",
                    ));
                }
            }
            entries.push((f, entry));
        }
        let simple = match &self.backend {
            Backend::FreeProduct(_) => Simple::String(entries),
            _ => match entries.len() {
                0 => self.unit(),
                1 => entries.pop_entry(),
                _ => unreachable!("single-backend rings have one factor"),
            },
        };
        self.check_simple(&simple)?;
        Ok(simple)
    }
}

trait PopEntry {
    fn pop_entry(self) -> Simple;
}

impl PopEntry for Vec<(usize, Simple)> {
    fn pop_entry(mut self) -> Simple {
        self.pop().expect("nonempty").1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ring::{cyclic_group, RingHandle};
    use std::sync::Arc;

    #[test]
    fn colliding_generator_names_advance_through_the_alphabet() {
        let ring = catalog::ring_from_spec("freeprod:bu,bu").unwrap();
        let space = ring.letter_space();
        let r = space.resolve(&ring, "r").unwrap();
        let s = space.resolve(&ring, "s").unwrap();
        assert!(matches!(r, LetterAddr::DatumLetter { factor: 0, .. }));
        assert!(matches!(s, LetterAddr::DatumLetter { factor: 1, .. }));
    }

    #[test]
    fn starred_names_keep_their_suffix() {
        let ring = catalog::ring_from_spec("freeprod:au,au").unwrap();
        let space = ring.letter_space();
        assert!(matches!(
            space.resolve(&ring, "b*").unwrap(),
            LetterAddr::DatumLetter { factor: 1, .. }
        ));
    }

    #[test]
    fn second_cyclic_factor_gets_a_suffix() {
        let ring = catalog::ring_from_spec("freeprod:refl:2,refl:3").unwrap();
        let space = ring.letter_space();
        assert!(matches!(
            space.resolve(&ring, "1").unwrap(),
            LetterAddr::DatumLetter { factor: 0, .. }
        ));
        assert!(matches!(
            space.resolve(&ring, "2#1").unwrap(),
            LetterAddr::DatumLetter { factor: 1, .. }
        ));
        // bare residues canonicalize into the first cyclic factor
        assert_eq!(
            space.resolve(&ring, "2"),
            Some(LetterAddr::DatumLetter {
                factor: 0,
                letter: ring.factors().unwrap()[0].as_free_datum().unwrap().letter(0).unwrap()
            })
        );
    }

    #[test]
    fn word_literals_group_runs_by_factor() {
        let ring = catalog::ring_from_spec("freeprod:bu,bu").unwrap();
        let space = ring.letter_space();
        let addrs: Vec<LetterAddr> = ["r", "r", "s", "r"]
            .iter()
            .map(|n| space.resolve(&ring, n).unwrap())
            .collect();
        let simple = ring.simple_from_letters(&addrs).unwrap();
        assert_eq!(space.format_simple(&ring, &simple), "[r r s r]");
        assert_eq!(ring.simple_len(&simple), 4);
    }

    #[test]
    fn group_letters_multiply_and_trivial_runs_are_rejected_when_exposed() {
        let z2 = RingHandle::finite_group(Arc::new(cyclic_group(2)));
        let ring =
            RingHandle::free_product(vec![catalog::ring_from_spec("bu").unwrap(), z2]).unwrap();
        let space = ring.letter_space();
        let resolve = |n: &str| space.resolve(&ring, n).unwrap();
        // [g g] collapses to the identity, so [r g g] is just [r]
        let simple = ring
            .simple_from_letters(&[resolve("r"), resolve("g"), resolve("g")])
            .unwrap();
        assert_eq!(space.format_simple(&ring, &simple), "[r]");
        // [r g g r] would expose two bu-runs: not a simple
        let err = ring.simple_from_letters(&[
            resolve("r"),
            resolve("g"),
            resolve("g"),
            resolve("r"),
        ]);
        assert!(err.is_err());
    }

    #[test]
    fn single_ring_literals() {
        let au = catalog::ring_from_spec("au").unwrap();
        let space = au.letter_space();
        let addrs =
            vec![space.resolve(&au, "a").unwrap(), space.resolve(&au, "a*").unwrap()];
        let s = au.simple_from_letters(&addrs).unwrap();
        assert_eq!(space.format_simple(&au, &s), "[a a*]");
        assert_eq!(au.simple_from_letters(&[]).unwrap(), au.unit());
    }
}
