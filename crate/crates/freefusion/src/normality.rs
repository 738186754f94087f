//! Based and ad-invariant sub-semiring machinery at fusion level.
//!
//! A based subring is a set of simples containing the unit, closed under
//! duals, and closed under the simple constituents of pairwise products. The
//! ad-invariant closure additionally absorbs, for every nontrivial member
//! `x` and every ring simple `y`, the constituents of the conjugation
//! products `y · x · y*` (the unit is exempt: the adjoint action on the
//! scalars stays scalar). That conjugation criterion is this crate's
//! operational notion of ad-invariance; saturation results are always
//! statements about the bounded slice and carry a `hit_bound` flag whenever
//! a constituent was discarded for exceeding the bound.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cocenter::{cocenter_simples, CocenterError};
use crate::ring::{LetterRange, RingElement, RingError, RingHandle, Simple};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum NormalityError {
    #[error("generator {0} exceeds the closure bound")]
    GeneratorOutOfBound(String),
    #[error("inner bound must not exceed the outer bound")]
    BadBounds,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Cocenter(#[from] CocenterError),
}

/// A based involution-invariant set of simples, truncated at `max_len`.
#[derive(Clone, Debug)]
pub struct BasedSubring {
    pub ring: RingHandle,
    pub max_len: usize,
    pub simples: BTreeSet<Simple>,
}

impl BasedSubring {
    pub fn contains(&self, s: &Simple) -> bool {
        self.simples.contains(s)
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }
}

/// Saturation outcome: the closure, the generators it started from, how many
/// rounds the fixed point took, and whether any constituent was truncated.
#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub generators: BTreeSet<Simple>,
    pub rounds: usize,
    pub result: BasedSubring,
    pub hit_bound: bool,
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    pub max_len: usize,
    pub letter_range: Option<LetterRange>,
    pub parallel: bool,
    /// Also close under conjugation by all ring simples (ad-invariance).
    conjugate: bool,
}

impl ClosureOptions {
    pub fn new(max_len: usize) -> Self {
        ClosureOptions { max_len, letter_range: None, parallel: false, conjugate: true }
    }

    pub fn with_letter_range(mut self, range: Option<LetterRange>) -> Self {
        self.letter_range = range;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

fn conjugators_for(
    h: &RingHandle,
    member_len: usize,
    max_len: usize,
    range: Option<&LetterRange>,
) -> Result<Vec<Simple>, RingError> {
    // |y| + |x| + |y*| <= max_len, and |y*| = |y|
    let available = max_len.saturating_sub(member_len) / 2;
    if available == 0 {
        return Ok(Vec::new());
    }
    Ok(h.enumerate_simples(available, range)?
        .into_iter()
        .filter(|y| *y != h.unit())
        .collect())
}

/// Constituents of `y · x · y*`, each within the bound by construction.
fn conjugate(h: &RingHandle, y: &Simple, x: &Simple) -> Result<RingElement, RingError> {
    let yx = h.product(y, x)?;
    let y_star = RingElement::simple(h.clone(), h.dual_simple(y)?)?;
    yx.mul(&y_star)
}

struct Saturator {
    ring: RingHandle,
    opts: ClosureOptions,
    members: BTreeSet<Simple>,
    hit_bound: bool,
    rounds: usize,
}

impl Saturator {
    fn new(
        h: &RingHandle,
        gens: &[Simple],
        opts: ClosureOptions,
    ) -> Result<Self, NormalityError> {
        let mut members = BTreeSet::new();
        members.insert(h.unit());
        for g in gens {
            if !h.is_valid_simple(g) {
                return Err(NormalityError::Ring(RingError::NotASimple(format!("{g:?}"))));
            }
            if h.simple_len(g) > opts.max_len {
                return Err(NormalityError::GeneratorOutOfBound(format!("{g:?}")));
            }
            members.insert(g.clone());
            members.insert(h.dual_simple(g)?);
        }
        Ok(Saturator { ring: h.clone(), opts, members, hit_bound: false, rounds: 0 })
    }

    /// Constituents contributed by one member pair, paired with a truncation
    /// flag.
    fn pair_constituents(
        h: &RingHandle,
        max_len: usize,
        x: &Simple,
        y: &Simple,
    ) -> Result<(Vec<Simple>, bool), RingError> {
        let mut out = Vec::new();
        let mut hit = false;
        for (t, _) in h.product(x, y)?.terms() {
            if h.simple_len(t) <= max_len {
                out.push(t.clone());
            } else {
                hit = true;
            }
        }
        Ok((out, hit))
    }

    fn run(&mut self) -> Result<(), NormalityError> {
        let mut frontier: Vec<Simple> = self.members.iter().cloned().collect();
        while !frontier.is_empty() {
            let members: Vec<Simple> = self.members.iter().cloned().collect();
            // every pair with at least one side in the frontier, both orders
            let mut pair_set: BTreeSet<(Simple, Simple)> = BTreeSet::new();
            for x in &frontier {
                for y in &members {
                    pair_set.insert((x.clone(), y.clone()));
                    pair_set.insert((y.clone(), x.clone()));
                }
            }
            let pairs: Vec<(Simple, Simple)> = pair_set.into_iter().collect();
            let ring = &self.ring;
            let max_len = self.opts.max_len;
            let product_results: Vec<(Vec<Simple>, bool)> = if self.opts.parallel {
                pairs
                    .par_iter()
                    .map(|(x, y)| Self::pair_constituents(ring, max_len, x, y))
                    .collect::<Result<_, _>>()?
            } else {
                pairs
                    .iter()
                    .map(|(x, y)| Self::pair_constituents(ring, max_len, x, y))
                    .collect::<Result<_, _>>()?
            };
            let mut fresh: BTreeSet<Simple> = BTreeSet::new();
            for (constituents, hit) in product_results {
                self.hit_bound |= hit;
                for t in constituents {
                    if !self.members.contains(&t) {
                        fresh.insert(ring.dual_simple(&t)?);
                        fresh.insert(t);
                    }
                }
            }
            if self.opts.conjugate {
                let range = self.opts.letter_range.as_ref();
                let unit = ring.unit();
                // conjugation moves nontrivial members only: the adjoint
                // action on the scalars stays scalar
                let mut conj_pairs: Vec<(Simple, Simple)> = Vec::new();
                for x in frontier.iter().filter(|x| **x != unit) {
                    for y in conjugators_for(ring, ring.simple_len(x), max_len, range)? {
                        conj_pairs.push((y, x.clone()));
                    }
                }
                let conj_results: Vec<RingElement> = if self.opts.parallel {
                    conj_pairs
                        .par_iter()
                        .map(|(y, x)| conjugate(ring, y, x))
                        .collect::<Result<_, _>>()?
                } else {
                    conj_pairs
                        .iter()
                        .map(|(y, x)| conjugate(ring, y, x))
                        .collect::<Result<_, _>>()?
                };
                for el in conj_results {
                    for (t, _) in el.terms() {
                        if ring.simple_len(t) > max_len {
                            self.hit_bound = true;
                        } else if !self.members.contains(t) {
                            fresh.insert(ring.dual_simple(t)?);
                            fresh.insert(t.clone());
                        }
                    }
                }
            }
            fresh.retain(|t| !self.members.contains(t));
            if !fresh.is_empty() {
                self.rounds += 1;
            }
            frontier = fresh.iter().cloned().collect();
            self.members.extend(fresh);
        }
        Ok(())
    }
}

/// Smallest set containing the generators and the unit, closed under duals
/// and under in-bound constituents of pairwise products.
pub fn based_closure(
    h: &RingHandle,
    gens: &[Simple],
    max_len: usize,
) -> Result<BasedSubring, NormalityError> {
    let mut opts = ClosureOptions::new(max_len);
    opts.conjugate = false;
    let mut sat = Saturator::new(h, gens, opts)?;
    sat.run()?;
    Ok(BasedSubring { ring: h.clone(), max_len, simples: sat.members })
}

/// Based closure that additionally absorbs conjugation constituents
/// `y · x · y*` for every ring simple `y` with `2·len(y) + len(x) ≤ max_len`.
pub fn ad_closure(
    h: &RingHandle,
    gens: &[Simple],
    opts: &ClosureOptions,
) -> Result<SaturationReport, NormalityError> {
    let mut run_opts = opts.clone();
    run_opts.conjugate = true;
    let mut sat = Saturator::new(h, gens, run_opts)?;
    sat.run()?;
    Ok(SaturationReport {
        generators: gens.iter().cloned().collect(),
        rounds: sat.rounds,
        result: BasedSubring { ring: h.clone(), max_len: opts.max_len, simples: sat.members },
        hit_bound: sat.hit_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The closure of this generator contains every cocenter simple of
    /// length ≤ the inner bound.
    Saturates,
    /// It does not; the named cocenter simple is missing. At these bounds
    /// this contradicts saturation only within the bounded slice.
    Stuck { missing: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorVerdict {
    pub generator: String,
    pub closure_size: usize,
    pub rounds: usize,
    pub hit_bound: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicityReport {
    pub inner_len: usize,
    pub outer_len: usize,
    pub cocenter_size: usize,
    pub verdicts: Vec<GeneratorVerdict>,
}

impl SimplicityReport {
    pub fn all_saturate(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict == Verdict::Saturates)
    }
}

/// For every nontrivial cocenter simple of length ≤ `inner_len`, saturates
/// its ad-closure at `outer_len` and reports whether the closure swallows
/// the whole inner cocenter slice.
pub fn bounded_simplicity_check(
    h: &RingHandle,
    inner_len: usize,
    outer_len: usize,
    opts: &ClosureOptions,
) -> Result<SimplicityReport, NormalityError> {
    if inner_len > outer_len {
        return Err(NormalityError::BadBounds);
    }
    let range = opts.letter_range.as_ref();
    let slice = cocenter_simples(h, inner_len, range)?;
    let space = h.letter_space();
    let mut verdicts = Vec::new();
    for g in &slice.simples {
        if *g == h.unit() {
            continue;
        }
        let mut run_opts = opts.clone();
        run_opts.max_len = outer_len;
        let report = ad_closure(h, std::slice::from_ref(g), &run_opts)?;
        let missing = slice.simples.iter().find(|s| !report.result.contains(s));
        verdicts.push(GeneratorVerdict {
            generator: space.format_simple(h, g),
            closure_size: report.result.len(),
            rounds: report.rounds,
            hit_bound: report.hit_bound,
            verdict: match missing {
                None => Verdict::Saturates,
                Some(m) => Verdict::Stuck { missing: space.format_simple(h, m) },
            },
        });
    }
    Ok(SimplicityReport {
        inner_len,
        outer_len,
        cocenter_size: slice.simples.len(),
        verdicts,
    })
}
