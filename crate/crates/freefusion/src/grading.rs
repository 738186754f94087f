//! Universal grading (chain) groups.
//!
//! Every fusion ring carries an initial grading of its simples by a group;
//! the degree map sends the unit to the identity, duals to inverses, and is
//! multiplicative across the constituents of a product. For a free datum the
//! group is presented by the letters, with `*` becoming inversion and `∘`
//! becoming multiplication; this module recognizes the presentations that
//! reduce to free products of cyclic groups and refuses exactness elsewhere.
//! Finite group backends are their own chain group. A bounded union-find
//! oracle is available for every backend: it merges all simple constituents
//! of every in-bound product and never claims completeness beyond its bound.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::datum::{FusionDatum, Letter};
use crate::ring::{GroupTable, LetterRange, RingError, RingHandle, Simple};
use crate::unionfind::UnionFind;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("no exact chain group is available: {0}")]
    PresentationNotRecognized(String),
    #[error("the alphabet is infinite; supply a letter range")]
    UnboundedAlphabet,
    #[error("simple {0} is outside the oracle's enumeration bound")]
    OutOfOracleBound(String),
    #[error("element does not belong to this chain group")]
    KindMismatch,
    #[error("class product not determined within the oracle bound")]
    OracleProductUndefined,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// An element of a chain group, in the representation matching its group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ChainGroupElement {
    /// Alternating normal form in a free product of cyclic groups:
    /// `(component, exponent)` entries with nonzero exponents and distinct
    /// consecutive components. Empty = identity.
    NormalForm(Vec<(usize, i64)>),
    /// An element of a finite group backend.
    Group(usize),
    /// An equivalence class id of the bounded oracle.
    Class(usize),
}

/// How the letters (or elements) of one factor map into the cyclic
/// components of the chain group.
#[derive(Clone, Debug)]
enum FactorDegrees {
    /// Cyclic datum: residue `x` has exponent `x` in `component`.
    CyclicRule { component: usize },
    /// Table datum: explicit degrees; letters of degree one are omitted.
    LetterMap(BTreeMap<Letter, (usize, i64)>),
    /// Cyclic group backend: element `g` has exponent `exps[g]` in `component`.
    GroupPower { component: usize, exps: Vec<i64> },
    /// Factor with trivial chain group.
    Trivial,
}

/// A free product of cyclic groups with a degree assignment for one ring.
#[derive(Clone, Debug)]
pub struct CyclicsChain {
    orders: Vec<Option<u64>>,
    factors: Vec<FactorDegrees>,
}

/// A bounded union-find oracle over the enumerated simples of a ring.
#[derive(Clone, Debug)]
pub struct OracleChain {
    ring: RingHandle,
    max_len: usize,
    simples: Vec<Simple>,
    index: BTreeMap<Simple, usize>,
    class_of: Vec<usize>,
    n_classes: usize,
    class_mul: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug)]
pub enum ChainGroup {
    Cyclics(CyclicsChain),
    FiniteGroup(Arc<GroupTable>),
    Oracle(OracleChain),
}

fn reduce_exp(order: Option<u64>, e: i64) -> i64 {
    match order {
        Some(s) => e.rem_euclid(s as i64),
        None => e,
    }
}

impl CyclicsChain {
    pub fn orders(&self) -> &[Option<u64>] {
        &self.orders
    }

    fn push(&self, stack: &mut Vec<(usize, i64)>, comp: usize, exp: i64) {
        let exp = reduce_exp(self.orders[comp], exp);
        if exp == 0 {
            return;
        }
        match stack.last_mut() {
            Some((c, e)) if *c == comp => {
                let combined = reduce_exp(self.orders[comp], *e + exp);
                if combined == 0 {
                    stack.pop();
                } else {
                    *e = combined;
                }
            }
            _ => stack.push((comp, exp)),
        }
    }

    fn mul(&self, a: &[(usize, i64)], b: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out = a.to_vec();
        for &(c, e) in b {
            self.push(&mut out, c, e);
        }
        out
    }

    fn inv(&self, a: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(a.len());
        for &(c, e) in a.iter().rev() {
            self.push(&mut out, c, -e);
        }
        out
    }

    fn letter_degree(&self, factor: usize, l: Letter) -> Vec<(usize, i64)> {
        match &self.factors[factor] {
            FactorDegrees::CyclicRule { component } => {
                let mut out = Vec::new();
                self.push(&mut out, *component, l.id());
                out
            }
            FactorDegrees::LetterMap(map) => match map.get(&l) {
                Some(&(c, e)) => vec![(c, e)],
                None => Vec::new(),
            },
            FactorDegrees::GroupPower { .. } | FactorDegrees::Trivial => Vec::new(),
        }
    }

    fn entry_degree(&self, factor: usize, s: &Simple) -> Result<Vec<(usize, i64)>, GradingError> {
        match (s, &self.factors[factor]) {
            (Simple::Word(w), _) => {
                let mut out = Vec::new();
                for &l in w.letters() {
                    for (c, e) in self.letter_degree(factor, l) {
                        self.push(&mut out, c, e);
                    }
                }
                Ok(out)
            }
            (Simple::Element(g), FactorDegrees::GroupPower { component, exps }) => {
                let mut out = Vec::new();
                self.push(&mut out, *component, exps[*g]);
                Ok(out)
            }
            (Simple::Element(_), FactorDegrees::Trivial) => Ok(Vec::new()),
            _ => Err(GradingError::KindMismatch),
        }
    }
}

/// Tries to recognize the chain group of a free datum as a free product of
/// cyclic groups.
///
/// Recognized components: dual-orbit pairs and self-dual letters with no
/// fusion (infinite cyclic and order two respectively), and components on
/// which the fusion is total, forms a cyclic group, and has the involution
/// as group inverse. Everything else is refused with a reason.
fn recognize_datum(d: &FusionDatum) -> Result<(Vec<Option<u64>>, FactorDegrees), GradingError> {
    if d.is_cyclic() {
        return Ok(match d.alphabet_len() {
            Some(1) => (Vec::new(), FactorDegrees::Trivial),
            Some(s) => (vec![Some(s as u64)], FactorDegrees::CyclicRule { component: 0 }),
            None => (vec![None], FactorDegrees::CyclicRule { component: 0 }),
        });
    }
    let letters = d.letters().expect("table alphabets are finite");
    let n = letters.len();
    let pos = |l: Letter| letters.iter().position(|&x| x == l).expect("letter of this datum");
    let mut uf = UnionFind::new(n);
    for (i, &l) in letters.iter().enumerate() {
        uf.union(i, pos(d.involve(l)));
        for (j, &m) in letters.iter().enumerate() {
            if let Some(f) = d.fuse(l, m) {
                uf.union(i, j);
                uf.union(i, pos(f));
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut comp_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        let root = uf.find(i);
        let idx = *comp_of_root.entry(root).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[idx].push(i);
    }

    let mut orders = Vec::new();
    let mut map = BTreeMap::new();
    for comp in &components {
        let fusion_pairs: Vec<(usize, usize)> = comp
            .iter()
            .flat_map(|&a| comp.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| d.fuse(letters[a], letters[b]).is_some())
            .collect();
        if fusion_pairs.is_empty() {
            match comp.as_slice() {
                [r] => {
                    // self-dual letter, no fusion: order two
                    orders.push(Some(2));
                    map.insert(letters[*r], (orders.len() - 1, 1));
                }
                [r, s] => {
                    // dual pair, no fusion: infinite cyclic
                    debug_assert_eq!(pos(d.involve(letters[*r])), *s);
                    orders.push(None);
                    map.insert(letters[*r], (orders.len() - 1, 1));
                    map.insert(letters[*s], (orders.len() - 1, -1));
                }
                _ => unreachable!("fusionless components are dual orbits"),
            }
            continue;
        }
        if fusion_pairs.len() != comp.len() * comp.len() {
            return Err(GradingError::PresentationNotRecognized(format!(
                "fusion is partial but not empty on the component of `{}`",
                d.letter_name(letters[comp[0]])
            )));
        }
        // total fusion: require a group with * as inverse, and cyclic
        let fuse = |a: usize, b: usize| pos(d.fuse(letters[a], letters[b]).unwrap());
        let identity = comp
            .iter()
            .copied()
            .find(|&e| comp.iter().all(|&x| fuse(e, x) == x && fuse(x, e) == x))
            .ok_or_else(|| {
                GradingError::PresentationNotRecognized(format!(
                    "total fusion on the component of `{}` has no identity",
                    d.letter_name(letters[comp[0]])
                ))
            })?;
        for &x in comp {
            let x_star = pos(d.involve(letters[x]));
            if fuse(x, x_star) != identity || fuse(x_star, x) != identity {
                return Err(GradingError::PresentationNotRecognized(format!(
                    "involution of `{}` is not its fusion inverse",
                    d.letter_name(letters[x])
                )));
            }
        }
        if comp.len() == 1 {
            // the trivial group contributes no component
            continue;
        }
        let generator = comp
            .iter()
            .copied()
            .find(|&g| {
                let mut seen = vec![false; n];
                let mut cur = identity;
                for _ in 0..comp.len() {
                    if seen[cur] {
                        return false;
                    }
                    seen[cur] = true;
                    cur = fuse(cur, g);
                }
                cur == identity
            })
            .ok_or_else(|| {
                GradingError::PresentationNotRecognized(format!(
                    "the fusion group on the component of `{}` is not cyclic",
                    d.letter_name(letters[comp[0]])
                ))
            })?;
        orders.push(Some(comp.len() as u64));
        let component = orders.len() - 1;
        let mut cur = identity;
        for k in 0..comp.len() {
            if cur != identity {
                map.insert(letters[cur], (component, k as i64));
            }
            cur = fuse(cur, generator);
        }
    }
    Ok((orders, FactorDegrees::LetterMap(map)))
}

/// Computes the exact chain group of a ring, when its presentation is
/// recognized.
///
/// Free data reduce per [`recognize_datum`]; a finite group backend is its
/// own chain group; free products take the coproduct of their factors'
/// groups (cyclic group factors reduce to one cyclic component). Finite
/// fusion tables, unrecognized data, and free products with a non-cyclic
/// group factor are refused — use [`bounded_chain_oracle`] there.
pub fn chain_group_of(h: &RingHandle) -> Result<ChainGroup, GradingError> {
    if let Some(d) = h.as_free_datum() {
        let (orders, degrees) = recognize_datum(d)?;
        return Ok(ChainGroup::Cyclics(CyclicsChain { orders, factors: vec![degrees] }));
    }
    if let Some(g) = h.as_finite_group() {
        return Ok(ChainGroup::FiniteGroup(g.clone()));
    }
    if h.as_finite_table().is_some() {
        return Err(GradingError::PresentationNotRecognized(
            "finite fusion tables have no recognized presentation; use the bounded oracle".into(),
        ));
    }
    let factors = h.factors().expect("remaining backend is a free product");
    let mut orders = Vec::new();
    let mut degrees = Vec::with_capacity(factors.len());
    for f in factors {
        if let Some(d) = f.as_free_datum() {
            let (mut local, deg) = recognize_datum(d)?;
            let offset = orders.len();
            orders.append(&mut local);
            degrees.push(shift_degrees(deg, offset));
        } else if let Some(g) = f.as_finite_group() {
            match g.cyclic_generator() {
                Some(_) if g.order() == 1 => degrees.push(FactorDegrees::Trivial),
                Some((_, dlog)) => {
                    orders.push(Some(g.order() as u64));
                    degrees.push(FactorDegrees::GroupPower {
                        component: orders.len() - 1,
                        exps: dlog,
                    });
                }
                None => {
                    return Err(GradingError::PresentationNotRecognized(
                        "a non-cyclic finite group factor does not fit the cyclic normal form; \
                         use the bounded oracle"
                            .into(),
                    ))
                }
            }
        } else {
            return Err(GradingError::PresentationNotRecognized(
                "free-product factor has no recognized chain group; use the bounded oracle".into(),
            ));
        }
    }
    Ok(ChainGroup::Cyclics(CyclicsChain { orders, factors: degrees }))
}

fn shift_degrees(deg: FactorDegrees, offset: usize) -> FactorDegrees {
    match deg {
        FactorDegrees::CyclicRule { component } => {
            FactorDegrees::CyclicRule { component: component + offset }
        }
        FactorDegrees::LetterMap(map) => FactorDegrees::LetterMap(
            map.into_iter().map(|(l, (c, e))| (l, (c + offset, e))).collect(),
        ),
        FactorDegrees::GroupPower { component, exps } => {
            FactorDegrees::GroupPower { component: component + offset, exps }
        }
        FactorDegrees::Trivial => FactorDegrees::Trivial,
    }
}

/// The union-find oracle over simples of length at most `max_len`: for
/// every pair of enumerated simples, merges the in-bound simple
/// constituents of `x · y` into one class (any two constituents of a
/// product are equivalent), then numbers the classes in canonical order.
pub fn bounded_chain_oracle(
    h: &RingHandle,
    max_len: usize,
    range: Option<&LetterRange>,
) -> Result<ChainGroup, GradingError> {
    let simples = h.enumerate_simples(max_len, range)?;
    let index: BTreeMap<Simple, usize> =
        simples.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let lens: Vec<usize> = simples.iter().map(|s| h.simple_len(s)).collect();
    let mut uf = UnionFind::new(simples.len());
    for i in 0..simples.len() {
        for j in 0..simples.len() {
            let prod = h.product(&simples[i], &simples[j])?;
            let mut first: Option<usize> = None;
            for (t, _) in prod.terms() {
                let Some(&k) = index.get(t) else { continue };
                match first {
                    None => first = Some(k),
                    Some(f) => {
                        uf.union(f, k);
                    }
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; simples.len()];
    let mut next = 0;
    let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..simples.len() {
        let root = uf.find(i);
        let id = *by_root.entry(root).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        class_of[i] = id;
    }
    let mut class_mul = BTreeMap::new();
    let mut conflicted = std::collections::BTreeSet::new();
    for i in 0..simples.len() {
        for j in 0..simples.len() {
            if lens[i] + lens[j] > max_len {
                continue;
            }
            let prod = h.product(&simples[i], &simples[j])?;
            let first = prod.terms().find_map(|(t, _)| index.get(t).copied());
            if let Some(k) = first {
                let target = class_of[k];
                let key = (class_of[i], class_of[j]);
                match class_mul.get(&key) {
                    None => {
                        class_mul.insert(key, target);
                    }
                    Some(&existing) if existing == target => {}
                    Some(_) => {
                        conflicted.insert(key);
                    }
                }
            }
        }
    }
    for key in conflicted {
        class_mul.remove(&key);
    }
    Ok(ChainGroup::Oracle(OracleChain {
        ring: h.clone(),
        max_len,
        simples,
        index,
        class_of,
        n_classes: next,
        class_mul,
    }))
}

/// Exact chain group when recognized, otherwise the bounded oracle at
/// `oracle_len`.
pub fn chain_group_or_oracle(
    h: &RingHandle,
    oracle_len: usize,
    range: Option<&LetterRange>,
) -> Result<ChainGroup, GradingError> {
    match chain_group_of(h) {
        Ok(g) => Ok(g),
        Err(GradingError::PresentationNotRecognized(_)) => {
            bounded_chain_oracle(h, oracle_len, range)
        }
        Err(e) => Err(e),
    }
}

impl OracleChain {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn simples(&self) -> &[Simple] {
        &self.simples
    }

    pub fn class_of(&self, s: &Simple) -> Option<usize> {
        self.index.get(s).map(|&i| self.class_of[i])
    }
}

impl ChainGroup {
    pub fn identity(&self) -> ChainGroupElement {
        match self {
            ChainGroup::Cyclics(_) => ChainGroupElement::NormalForm(Vec::new()),
            ChainGroup::FiniteGroup(g) => ChainGroupElement::Group(g.identity()),
            ChainGroup::Oracle(_) => ChainGroupElement::Class(0),
        }
    }

    pub fn is_identity(&self, e: &ChainGroupElement) -> bool {
        *e == self.identity()
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ChainGroup::Oracle(_))
    }

    /// The degree of a simple of the ring this chain group was built for.
    pub fn degree(&self, s: &Simple) -> Result<ChainGroupElement, GradingError> {
        match self {
            ChainGroup::Cyclics(c) => match s {
                Simple::String(entries) => {
                    let mut nf = Vec::new();
                    for (f, e) in entries {
                        if *f >= c.factors.len() {
                            return Err(GradingError::KindMismatch);
                        }
                        let d = c.entry_degree(*f, e)?;
                        nf = c.mul(&nf, &d);
                    }
                    Ok(ChainGroupElement::NormalForm(nf))
                }
                other => {
                    if c.factors.len() != 1 {
                        return Err(GradingError::KindMismatch);
                    }
                    Ok(ChainGroupElement::NormalForm(c.entry_degree(0, other)?))
                }
            },
            ChainGroup::FiniteGroup(g) => match s {
                Simple::Element(i) if *i < g.order() => Ok(ChainGroupElement::Group(*i)),
                _ => Err(GradingError::KindMismatch),
            },
            ChainGroup::Oracle(o) => o
                .class_of(s)
                .map(ChainGroupElement::Class)
                .ok_or_else(|| GradingError::OutOfOracleBound(format!("{s:?}"))),
        }
    }

    pub fn mul(
        &self,
        a: &ChainGroupElement,
        b: &ChainGroupElement,
    ) -> Result<ChainGroupElement, GradingError> {
        match (self, a, b) {
            (ChainGroup::Cyclics(c), ChainGroupElement::NormalForm(x), ChainGroupElement::NormalForm(y)) => {
                Ok(ChainGroupElement::NormalForm(c.mul(x, y)))
            }
            (ChainGroup::FiniteGroup(g), ChainGroupElement::Group(x), ChainGroupElement::Group(y)) => {
                Ok(ChainGroupElement::Group(g.mul(*x, *y)))
            }
            (ChainGroup::Oracle(o), ChainGroupElement::Class(x), ChainGroupElement::Class(y)) => o
                .class_mul
                .get(&(*x, *y))
                .map(|&c| ChainGroupElement::Class(c))
                .ok_or(GradingError::OracleProductUndefined),
            _ => Err(GradingError::KindMismatch),
        }
    }

    pub fn inverse(&self, a: &ChainGroupElement) -> Result<ChainGroupElement, GradingError> {
        match (self, a) {
            (ChainGroup::Cyclics(c), ChainGroupElement::NormalForm(x)) => {
                Ok(ChainGroupElement::NormalForm(c.inv(x)))
            }
            (ChainGroup::FiniteGroup(g), ChainGroupElement::Group(x)) => {
                Ok(ChainGroupElement::Group(g.inverse(*x)))
            }
            (ChainGroup::Oracle(o), ChainGroupElement::Class(x)) => {
                let rep = o
                    .class_of
                    .iter()
                    .position(|&c| c == *x)
                    .ok_or(GradingError::KindMismatch)?;
                let dual = o.ring.dual_simple(&o.simples[rep])?;
                o.class_of(&dual)
                    .map(ChainGroupElement::Class)
                    .ok_or_else(|| GradingError::OutOfOracleBound(format!("{dual:?}")))
            }
            _ => Err(GradingError::KindMismatch),
        }
    }

    /// Short human description, e.g. `Z * Z/2`, `trivial`, `finite group of
    /// order 6`, `bounded oracle (len <= 4, 9 classes)`.
    pub fn describe(&self) -> String {
        match self {
            ChainGroup::Cyclics(c) => {
                if c.orders.is_empty() {
                    return "trivial".into();
                }
                c.orders
                    .iter()
                    .map(|o| match o {
                        None => "Z".to_owned(),
                        Some(s) => format!("Z/{s}"),
                    })
                    .collect::<Vec<_>>()
                    .join(" * ")
            }
            ChainGroup::FiniteGroup(g) => format!("finite group of order {}", g.order()),
            ChainGroup::Oracle(o) => {
                format!("bounded oracle (len <= {}, {} classes)", o.max_len, o.n_classes)
            }
        }
    }

    pub fn format_element(&self, e: &ChainGroupElement) -> String {
        match (self, e) {
            (_, ChainGroupElement::NormalForm(nf)) if nf.is_empty() => "e".into(),
            (_, ChainGroupElement::NormalForm(nf)) => {
                let mut out = String::new();
                for (i, (c, exp)) in nf.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    if *exp == 1 {
                        let _ = write!(out, "g{c}");
                    } else {
                        let _ = write!(out, "g{c}^{exp}");
                    }
                }
                out
            }
            (ChainGroup::FiniteGroup(g), ChainGroupElement::Group(x)) => g.name(*x).to_owned(),
            (_, ChainGroupElement::Group(x)) => format!("#{x}"),
            (_, ChainGroupElement::Class(c)) => format!("class {c}"),
        }
    }
}

/// Structured chain-group report: kind, generators and orders, and the
/// degree of each enumerated simple.
#[derive(Serialize)]
pub struct ChainGroupReport {
    pub kind: String,
    pub exact: bool,
    pub generators: Vec<String>,
    pub orders: Vec<String>,
    pub degrees: Vec<(String, String)>,
}

pub fn chain_group_report(
    h: &RingHandle,
    g: &ChainGroup,
    max_len: usize,
    range: Option<&LetterRange>,
) -> Result<ChainGroupReport, GradingError> {
    let (generators, orders) = match g {
        ChainGroup::Cyclics(c) => (
            (0..c.orders.len()).map(|i| format!("g{i}")).collect(),
            c.orders
                .iter()
                .map(|o| o.map_or("inf".to_owned(), |s| s.to_string()))
                .collect(),
        ),
        ChainGroup::FiniteGroup(t) => {
            (t.names().to_vec(), vec![t.order().to_string()])
        }
        ChainGroup::Oracle(o) => {
            ((0..o.n_classes).map(|c| format!("class {c}")).collect(), Vec::new())
        }
    };
    let space = h.letter_space();
    let mut degrees = Vec::new();
    for s in h.enumerate_simples(max_len, range)? {
        let deg = g.degree(&s)?;
        degrees.push((space.format_simple(h, &s), g.format_element(&deg)));
    }
    Ok(ChainGroupReport { kind: g.describe(), exact: g.is_exact(), generators, orders, degrees })
}
