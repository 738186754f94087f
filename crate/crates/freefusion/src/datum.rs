//! Fusion data: an alphabet `R` with an involution `*` and a partial fusion
//! map `∘ : R × R → R ∪ {∅}`.
//!
//! A datum is either backed by explicit finite tables or by the cyclic rule
//! (letters are residues, `x* = -x`, `x ∘ y = x + y`, modulus `s` or none for
//! the infinite case). Data are immutable after construction and all
//! operations on them are pure, so they can be shared freely across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single letter of a fusion alphabet.
///
/// For table-backed data the id is an index into the alphabet; for cyclic
/// data it is a residue (canonicalized mod `s` when `s` is finite).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(i64);

impl Letter {
    pub fn id(self) -> i64 {
        self.0
    }

    pub(crate) fn raw(id: i64) -> Self {
        Letter(id)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Kind {
    Table {
        names: Vec<String>,
        involution: Vec<usize>,
        fusion: BTreeMap<(usize, usize), usize>,
    },
    Cyclic {
        /// `None` means the infinite cyclic rule (letters are arbitrary integers).
        modulus: Option<u64>,
    },
}

/// A fusion datum `(R, *, ∘)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionDatum {
    kind: Kind,
    checked: bool,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("letter id {0} is not valid for this datum")]
    InvalidLetter(i64),
    #[error("unknown letter name `{0}`")]
    UnknownLetter(String),
    #[error("letter name `{0}` is empty or contains whitespace or brackets")]
    BadLetterName(String),
    #[error("involution table has {got} entries for {expected} letters")]
    InvolutionShape { expected: usize, got: usize },
    #[error("fusion table references letter index {0} outside the alphabet")]
    FusionShape(usize),
    #[error("cyclic modulus must be positive")]
    ZeroModulus,
    #[error("datum axiom violated: {0}")]
    Axiom(#[from] DatumViolation),
}

/// First axiom violated by a candidate datum, with witness letters.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DatumViolation {
    #[error("involution is not involutive at letter `{letter}`")]
    InvolutionNotInvolutive { letter: String },
    #[error("fusion is not *-compatible at (`{a}`, `{b}`): ({a} ∘ {b})* != {b}* ∘ {a}*")]
    FusionStarIncompatible { a: String, b: String },
    #[error("fusion is not associative at (`{a}`, `{b}`, `{c}`)")]
    FusionNotAssociative { a: String, b: String, c: String },
}

fn check_name(name: &str) -> Result<(), DatumError> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '[' || c == ']') {
        return Err(DatumError::BadLetterName(name.to_owned()));
    }
    Ok(())
}

impl FusionDatum {
    /// Builds a table-backed datum and checks the datum axioms.
    pub fn table(
        names: Vec<String>,
        involution: Vec<usize>,
        fusion: BTreeMap<(usize, usize), usize>,
    ) -> Result<Arc<Self>, DatumError> {
        let d = Self::table_unchecked(names, involution, fusion)?;
        d.validate()?;
        Ok(Arc::new(FusionDatum { checked: true, ..(*d).clone() }))
    }

    /// Builds a table-backed datum without checking the datum axioms.
    ///
    /// Structural sanity (index ranges, name syntax) is still enforced. Use
    /// [`FusionDatum::validate`] or the semiring associativity probe to vet
    /// the result.
    pub fn table_unchecked(
        names: Vec<String>,
        involution: Vec<usize>,
        fusion: BTreeMap<(usize, usize), usize>,
    ) -> Result<Arc<Self>, DatumError> {
        let n = names.len();
        for name in &names {
            check_name(name)?;
        }
        if involution.len() != n {
            return Err(DatumError::InvolutionShape { expected: n, got: involution.len() });
        }
        for &i in &involution {
            if i >= n {
                return Err(DatumError::FusionShape(i));
            }
        }
        for (&(a, b), &c) in &fusion {
            if a >= n || b >= n || c >= n {
                return Err(DatumError::FusionShape(a.max(b).max(c)));
            }
        }
        Ok(Arc::new(FusionDatum {
            kind: Kind::Table { names, involution, fusion },
            checked: false,
        }))
    }

    /// The cyclic datum on `Z/s`: `x* = -x`, `x ∘ y = x + y`.
    pub fn cyclic(modulus: u64) -> Result<Arc<Self>, DatumError> {
        if modulus == 0 {
            return Err(DatumError::ZeroModulus);
        }
        Ok(Arc::new(FusionDatum { kind: Kind::Cyclic { modulus: Some(modulus) }, checked: true }))
    }

    /// The infinite cyclic datum on `Z`.
    pub fn cyclic_infinite() -> Arc<Self> {
        Arc::new(FusionDatum { kind: Kind::Cyclic { modulus: None }, checked: true })
    }

    /// Whether the datum axioms were verified at construction.
    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.kind, Kind::Cyclic { .. })
    }

    /// Number of letters, or `None` for an infinite alphabet.
    pub fn alphabet_len(&self) -> Option<usize> {
        match &self.kind {
            Kind::Table { names, .. } => Some(names.len()),
            Kind::Cyclic { modulus: Some(s) } => Some(*s as usize),
            Kind::Cyclic { modulus: None } => None,
        }
    }

    /// Canonicalizes an id into a letter of this datum.
    pub fn letter(&self, id: i64) -> Result<Letter, DatumError> {
        match &self.kind {
            Kind::Table { names, .. } => {
                if id >= 0 && (id as usize) < names.len() {
                    Ok(Letter(id))
                } else {
                    Err(DatumError::InvalidLetter(id))
                }
            }
            Kind::Cyclic { modulus: Some(s) } => Ok(Letter(id.rem_euclid(*s as i64))),
            Kind::Cyclic { modulus: None } => Ok(Letter(id)),
        }
    }

    pub fn letter_valid(&self, l: Letter) -> bool {
        match &self.kind {
            Kind::Table { names, .. } => l.0 >= 0 && (l.0 as usize) < names.len(),
            Kind::Cyclic { modulus: Some(s) } => l.0 >= 0 && l.0 < *s as i64,
            Kind::Cyclic { modulus: None } => true,
        }
    }

    pub fn letter_by_name(&self, name: &str) -> Result<Letter, DatumError> {
        match &self.kind {
            Kind::Table { names, .. } => names
                .iter()
                .position(|n| n == name)
                .map(|i| Letter(i as i64))
                .ok_or_else(|| DatumError::UnknownLetter(name.to_owned())),
            Kind::Cyclic { .. } => {
                let id: i64 =
                    name.parse().map_err(|_| DatumError::UnknownLetter(name.to_owned()))?;
                self.letter(id)
            }
        }
    }

    pub fn letter_name(&self, l: Letter) -> String {
        match &self.kind {
            Kind::Table { names, .. } => names
                .get(l.0 as usize)
                .cloned()
                .unwrap_or_else(|| format!("?{}", l.0)),
            Kind::Cyclic { .. } => l.0.to_string(),
        }
    }

    /// The involution `r ↦ r*`.
    pub fn involve(&self, l: Letter) -> Letter {
        match &self.kind {
            Kind::Table { involution, .. } => Letter(involution[l.0 as usize] as i64),
            Kind::Cyclic { modulus: Some(s) } => Letter((-l.0).rem_euclid(*s as i64)),
            Kind::Cyclic { modulus: None } => Letter(-l.0),
        }
    }

    /// The partial fusion `r ∘ s`, or `None` when undefined.
    pub fn fuse(&self, a: Letter, b: Letter) -> Option<Letter> {
        match &self.kind {
            Kind::Table { fusion, .. } => {
                fusion.get(&(a.0 as usize, b.0 as usize)).map(|&c| Letter(c as i64))
            }
            Kind::Cyclic { modulus: Some(s) } => Some(Letter((a.0 + b.0).rem_euclid(*s as i64))),
            Kind::Cyclic { modulus: None } => Some(Letter(a.0 + b.0)),
        }
    }

    /// All letters, in canonical order, or `None` for an infinite alphabet.
    pub fn letters(&self) -> Option<Vec<Letter>> {
        match &self.kind {
            Kind::Table { names, .. } => Some((0..names.len() as i64).map(Letter).collect()),
            Kind::Cyclic { modulus: Some(s) } => Some((0..*s as i64).map(Letter).collect()),
            Kind::Cyclic { modulus: None } => None,
        }
    }

    /// Letters restricted to an explicit id range (used for infinite alphabets).
    pub fn letters_within(&self, range: std::ops::RangeInclusive<i64>) -> Vec<Letter> {
        match self.letters() {
            Some(all) => all,
            None => range.map(Letter).collect(),
        }
    }

    /// Checks the three datum axioms, returning the first violation found.
    ///
    /// Finite tables are checked exhaustively. Cyclic data satisfy the axioms
    /// by the group laws of `Z/s`, so nothing needs checking.
    pub fn validate(&self) -> Result<(), DatumViolation> {
        let (names, involution, fusion) = match &self.kind {
            Kind::Cyclic { .. } => return Ok(()),
            Kind::Table { names, involution, fusion } => (names, involution, fusion),
        };
        let n = names.len();
        for r in 0..n {
            if involution[involution[r]] != r {
                return Err(DatumViolation::InvolutionNotInvolutive { letter: names[r].clone() });
            }
        }
        for (&(a, b), &c) in fusion {
            let expect = involution[c];
            match fusion.get(&(involution[b], involution[a])) {
                Some(&got) if got == expect => {}
                _ => {
                    return Err(DatumViolation::FusionStarIncompatible {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    })
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = fusion.get(&(a, b)).and_then(|&ab| fusion.get(&(ab, c)));
                    let right = fusion.get(&(b, c)).and_then(|&bc| fusion.get(&(a, bc)));
                    if left != right {
                        return Err(DatumViolation::FusionNotAssociative {
                            a: names[a].clone(),
                            b: names[b].clone(),
                            c: names[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FusionDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Table { names, .. } => write!(f, "table datum on {{{}}}", names.join(", ")),
            Kind::Cyclic { modulus: Some(s) } => write!(f, "cyclic datum mod {s}"),
            Kind::Cyclic { modulus: None } => write!(f, "infinite cyclic datum"),
        }
    }
}

// Structured-text (JSON) form of a datum definition:
// {"kind":"table","letters":[...],"involution":{...},"fusion":{"r":{"s":"t"}}}
// {"kind":"cyclic","s":3} or {"kind":"cyclic","s":"inf"}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DatumJson {
    Table {
        letters: Vec<String>,
        involution: BTreeMap<String, String>,
        #[serde(default)]
        fusion: BTreeMap<String, BTreeMap<String, String>>,
        #[serde(default)]
        unchecked: bool,
    },
    Cyclic {
        s: CyclicParam,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CyclicParam {
    Finite(u64),
    Inf(String),
}

impl FusionDatum {
    pub fn from_json(value: &serde_json::Value) -> Result<Arc<Self>, serde_json::Error> {
        let parsed: DatumJson = serde_json::from_value(value.clone())?;
        match parsed {
            DatumJson::Cyclic { s: CyclicParam::Finite(s) } => {
                FusionDatum::cyclic(s).map_err(serde_json::Error::custom)
            }
            DatumJson::Cyclic { s: CyclicParam::Inf(word) } => {
                if word == "inf" {
                    Ok(FusionDatum::cyclic_infinite())
                } else {
                    Err(serde_json::Error::custom(format!("bad cyclic parameter `{word}`")))
                }
            }
            DatumJson::Table { letters, involution, fusion, unchecked } => {
                let index = |name: &str| {
                    letters
                        .iter()
                        .position(|l| l == name)
                        .ok_or_else(|| serde_json::Error::custom(format!("unknown letter `{name}`")))
                };
                let mut inv = vec![usize::MAX; letters.len()];
                for (a, b) in &involution {
                    inv[index(a)?] = index(b)?;
                }
                if let Some(missing) = inv.iter().position(|&i| i == usize::MAX) {
                    return Err(serde_json::Error::custom(format!(
                        "involution missing for letter `{}`",
                        letters[missing]
                    )));
                }
                let mut fus = BTreeMap::new();
                for (a, row) in &fusion {
                    for (b, c) in row {
                        fus.insert((index(a)?, index(b)?), index(c)?);
                    }
                }
                let built = if unchecked {
                    FusionDatum::table_unchecked(letters, inv, fus)
                } else {
                    FusionDatum::table(letters, inv, fus)
                };
                built.map_err(serde_json::Error::custom)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.kind {
            Kind::Cyclic { modulus: Some(s) } => serde_json::json!({"kind": "cyclic", "s": s}),
            Kind::Cyclic { modulus: None } => serde_json::json!({"kind": "cyclic", "s": "inf"}),
            Kind::Table { names, involution, fusion } => {
                let inv: BTreeMap<_, _> = names
                    .iter()
                    .enumerate()
                    .map(|(i, n)| (n.clone(), names[involution[i]].clone()))
                    .collect();
                let mut fus: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
                for (&(a, b), &c) in fusion {
                    fus.entry(names[a].clone())
                        .or_default()
                        .insert(names[b].clone(), names[c].clone());
                }
                let mut v = serde_json::json!({
                    "kind": "table",
                    "letters": names,
                    "involution": inv,
                    "fusion": fus,
                });
                if !self.checked {
                    v["unchecked"] = serde_json::Value::Bool(true);
                }
                v
            }
        }
    }
}
