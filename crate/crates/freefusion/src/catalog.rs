//! Builtin fusion data and ring specifications.
//!
//! Ring spec strings accepted by the CLI and by [`ring_from_spec`]:
//!
//! * `au` — two letters `a`, `a*` swapped by the involution, empty fusion
//!   (free unitary fusion rules).
//! * `bu` — one self-dual letter `r`, empty fusion (free orthogonal rules;
//!   tensor powers decompose like tensor powers of the fundamental
//!   representation of SU(2)).
//! * `aaut` — one self-dual letter `r` with `r ∘ r = r` (quantum
//!   automorphism rules, SO(3)-type).
//! * `refl:<s>` — the cyclic datum on `Z/s`; `refl:inf` for the infinite
//!   cyclic rule (quantum reflection rules).
//! * `group:<file>` — a finite group multiplication table (JSON).
//! * `table:<file>` — an explicit fusion table (JSON).
//! * `freeprod:<spec,...>` — the free product of the listed rings.
//! * any other string naming an existing file is loaded as a ring
//!   definition file.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::datum::{DatumViolation, FusionDatum};
use crate::ring::{
    FusionTable, FusionTableError, GroupLoadError, GroupTable, GroupTableError, RingError,
    RingHandle, TableLoadError,
};

/// Free unitary datum: `{a, a*}` with the swap involution and empty fusion.
pub fn au() -> Arc<FusionDatum> {
    FusionDatum::table(vec!["a".into(), "a*".into()], vec![1, 0], BTreeMap::new())
        .expect("builtin datum is valid")
}

/// Free orthogonal datum: one self-dual letter, empty fusion.
pub fn bu() -> Arc<FusionDatum> {
    FusionDatum::table(vec!["r".into()], vec![0], BTreeMap::new())
        .expect("builtin datum is valid")
}

/// Quantum automorphism datum: one self-dual letter with `r ∘ r = r`.
pub fn aaut() -> Arc<FusionDatum> {
    FusionDatum::table(vec!["r".into()], vec![0], [((0, 0), 0)].into_iter().collect())
        .expect("builtin datum is valid")
}

#[derive(Error, Debug)]
pub enum CatalogError {
    #[error("unknown ring spec `{0}`")]
    UnknownSpec(String),
    #[error("bad cyclic parameter `{0}` (expected a positive integer or `inf`)")]
    BadCyclicParam(String),
    #[error("reading `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid group table: {0}")]
    InvalidGroup(#[from] GroupTableError),
    #[error("invalid fusion table: {0}")]
    InvalidTable(#[from] FusionTableError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl From<GroupLoadError> for CatalogError {
    fn from(e: GroupLoadError) -> Self {
        match e {
            GroupLoadError::Shape(s) => CatalogError::Parse(s),
            GroupLoadError::Invalid(g) => CatalogError::InvalidGroup(g),
        }
    }
}

impl From<TableLoadError> for CatalogError {
    fn from(e: TableLoadError) -> Self {
        match e {
            TableLoadError::Shape(s) => CatalogError::Parse(s),
            TableLoadError::Invalid(t) => CatalogError::InvalidTable(t),
        }
    }
}

/// Resolves a ring spec string into a ring handle.
pub fn ring_from_spec(spec: &str) -> Result<RingHandle, CatalogError> {
    match spec {
        "au" => return Ok(RingHandle::free_datum(au())),
        "bu" => return Ok(RingHandle::free_datum(bu())),
        "aaut" => return Ok(RingHandle::free_datum(aaut())),
        _ => {}
    }
    if let Some(param) = spec.strip_prefix("refl:") {
        return Ok(RingHandle::free_datum(cyclic_param(param)?));
    }
    if let Some(path) = spec.strip_prefix("group:") {
        let table = GroupTable::from_json(&read_json(path)?)?;
        return Ok(RingHandle::finite_group(Arc::new(table)));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let table = FusionTable::from_json(&read_json(path)?)?;
        return Ok(RingHandle::finite_table(Arc::new(table)));
    }
    if let Some(list) = spec.strip_prefix("freeprod:") {
        let factors: Result<Vec<RingHandle>, CatalogError> =
            list.split(',').map(|s| ring_from_spec(s.trim())).collect();
        return Ok(RingHandle::free_product(factors?)?);
    }
    if Path::new(spec).is_file() {
        return ring_from_json(&read_json(spec)?);
    }
    Err(CatalogError::UnknownSpec(spec.to_owned()))
}

fn cyclic_param(param: &str) -> Result<Arc<FusionDatum>, CatalogError> {
    if param == "inf" {
        return Ok(FusionDatum::cyclic_infinite());
    }
    let s: u64 = param.parse().map_err(|_| CatalogError::BadCyclicParam(param.to_owned()))?;
    FusionDatum::cyclic(s).map_err(|_| CatalogError::BadCyclicParam(param.to_owned()))
}

fn read_json(path: &str) -> Result<serde_json::Value, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CatalogError::Io { path: path.to_owned(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Loads a ring definition from a JSON value. The `kind` field dispatches:
/// `cyclic` and `table`-with-`letters` are datum files, `group` is a
/// multiplication table, `table`-with-`simples` a fusion table, and
/// `freeprod` lists factor definitions.
pub fn ring_from_json(value: &serde_json::Value) -> Result<RingHandle, CatalogError> {
    use serde::de::Error;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| serde_json::Error::custom("ring definition needs a `kind` field"))?;
    match kind {
        "cyclic" => Ok(RingHandle::free_datum(FusionDatum::from_json(value)?)),
        "table" if value.get("letters").is_some() => {
            Ok(RingHandle::free_datum(FusionDatum::from_json(value)?))
        }
        "table" => Ok(RingHandle::finite_table(Arc::new(FusionTable::from_json(value)?))),
        "group" => Ok(RingHandle::finite_group(Arc::new(GroupTable::from_json(value)?))),
        "freeprod" => {
            let factors = value
                .get("factors")
                .and_then(|f| f.as_array())
                .ok_or_else(|| serde_json::Error::custom("freeprod needs a `factors` array"))?;
            let parsed: Result<Vec<RingHandle>, _> = factors.iter().map(ring_from_json).collect();
            Ok(RingHandle::free_product(parsed?)?)
        }
        other => Err(serde_json::Error::custom(format!("unknown ring kind `{other}`")).into()),
    }
}

/// Outcome of validating a ring definition.
#[derive(Debug, Serialize)]
pub enum ValidationOutcome {
    Ok,
    DatumViolation(String),
    GroupViolation(String),
    TableViolation(String),
}

#[derive(Debug, Serialize)]
pub struct ValidationReport {
    pub spec: String,
    pub outcome: ValidationOutcome,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        matches!(self.outcome, ValidationOutcome::Ok)
    }
}

fn datum_outcome(r: Result<(), DatumViolation>) -> ValidationOutcome {
    match r {
        Ok(()) => ValidationOutcome::Ok,
        Err(v) => ValidationOutcome::DatumViolation(v.to_string()),
    }
}

/// Validates the mathematical invariants behind a ring spec, loading table
/// data in unchecked mode so violations are reported rather than refused.
pub fn validate_spec(spec: &str) -> Result<ValidationReport, CatalogError> {
    let report = |outcome| ValidationReport { spec: spec.to_owned(), outcome };
    match spec {
        "au" | "bu" | "aaut" => return Ok(report(ValidationOutcome::Ok)),
        _ => {}
    }
    if let Some(param) = spec.strip_prefix("refl:") {
        return Ok(report(datum_outcome(cyclic_param(param)?.validate())));
    }
    if let Some(path) = spec.strip_prefix("group:") {
        return Ok(report(validate_group(&read_json(path)?)?));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        return Ok(report(validate_table(&read_json(path)?)?));
    }
    if let Some(list) = spec.strip_prefix("freeprod:") {
        for factor in list.split(',') {
            let inner = validate_spec(factor.trim())?;
            if !inner.is_ok() {
                return Ok(ValidationReport { spec: spec.to_owned(), outcome: inner.outcome });
            }
        }
        return Ok(report(ValidationOutcome::Ok));
    }
    if Path::new(spec).is_file() {
        return Ok(report(validate_json(&read_json(spec)?)?));
    }
    Err(CatalogError::UnknownSpec(spec.to_owned()))
}

fn validate_group(value: &serde_json::Value) -> Result<ValidationOutcome, CatalogError> {
    match GroupTable::from_json(value) {
        Ok(_) => Ok(ValidationOutcome::Ok),
        Err(GroupLoadError::Invalid(v)) => Ok(ValidationOutcome::GroupViolation(v.to_string())),
        Err(GroupLoadError::Shape(s)) => Err(CatalogError::Parse(s)),
    }
}

fn validate_table(value: &serde_json::Value) -> Result<ValidationOutcome, CatalogError> {
    match FusionTable::from_json(value) {
        Ok(_) => Ok(ValidationOutcome::Ok),
        Err(TableLoadError::Invalid(v)) => Ok(ValidationOutcome::TableViolation(v.to_string())),
        Err(TableLoadError::Shape(s)) => Err(CatalogError::Parse(s)),
    }
}

fn validate_json(value: &serde_json::Value) -> Result<ValidationOutcome, CatalogError> {
    use serde::de::Error;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| serde_json::Error::custom("ring definition needs a `kind` field"))?;
    match kind {
        "cyclic" => Ok(datum_outcome(FusionDatum::from_json(value)?.validate())),
        "table" if value.get("letters").is_some() => {
            // load without axiom checks, then report the first violation
            let mut unchecked = value.clone();
            unchecked["unchecked"] = serde_json::Value::Bool(true);
            Ok(datum_outcome(FusionDatum::from_json(&unchecked)?.validate()))
        }
        "table" => validate_table(value),
        "group" => validate_group(value),
        "freeprod" => {
            let factors = value
                .get("factors")
                .and_then(|f| f.as_array())
                .ok_or_else(|| serde_json::Error::custom("freeprod needs a `factors` array"))?;
            for f in factors {
                let outcome = validate_json(f)?;
                if !matches!(outcome, ValidationOutcome::Ok) {
                    return Ok(outcome);
                }
            }
            Ok(ValidationOutcome::Ok)
        }
        other => Err(serde_json::Error::custom(format!("unknown ring kind `{other}`")).into()),
    }
}

/// The rings exercised throughout the test suites.
pub fn catalog_rings() -> Vec<(&'static str, RingHandle)> {
    vec![
        ("au", ring_from_spec("au").unwrap()),
        ("bu", ring_from_spec("bu").unwrap()),
        ("aaut", ring_from_spec("aaut").unwrap()),
        ("refl:2", ring_from_spec("refl:2").unwrap()),
        ("refl:3", ring_from_spec("refl:3").unwrap()),
        ("freeprod:bu,bu", ring_from_spec("freeprod:bu,bu").unwrap()),
        ("freeprod:au,refl:2", ring_from_spec("freeprod:au,refl:2").unwrap()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_specs_resolve() {
        for (name, _) in catalog_rings() {
            assert!(ring_from_spec(name).is_ok());
        }
        assert!(ring_from_spec("refl:inf").is_ok());
        assert!(matches!(ring_from_spec("nonsense"), Err(CatalogError::UnknownSpec(_))));
        assert!(matches!(ring_from_spec("refl:zero"), Err(CatalogError::BadCyclicParam(_))));
    }

    #[test]
    fn builtin_specs_validate() {
        for name in ["au", "bu", "aaut", "refl:4", "refl:inf", "freeprod:bu,aaut"] {
            assert!(validate_spec(name).unwrap().is_ok());
        }
    }

    #[test]
    fn ring_json_kinds_dispatch() {
        let datum = serde_json::json!({
            "kind": "table",
            "letters": ["a", "a*"],
            "involution": {"a": "a*", "a*": "a"},
            "fusion": {},
        });
        assert!(ring_from_json(&datum).unwrap().as_free_datum().is_some());

        let group = crate::ring::cyclic_group(3).to_json();
        assert!(ring_from_json(&group).unwrap().as_finite_group().is_some());

        let table = crate::ring::rep_s3().to_json();
        assert!(ring_from_json(&table).unwrap().as_finite_table().is_some());

        let fp = serde_json::json!({"kind": "freeprod", "factors": [datum, group]});
        assert_eq!(ring_from_json(&fp).unwrap().factors().unwrap().len(), 2);
    }
}
