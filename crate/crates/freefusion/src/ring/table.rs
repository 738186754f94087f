//! Finite fusion table backends: explicitly listed simples with verified
//! structure constants. These let verified character tables of finite groups
//! (or any other finite fusion data) participate as free-product factors.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::Error as _;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FusionTableError {
    #[error("table must list at least the unit simple")]
    Empty,
    #[error("simple name `{0}` is empty, repeated, or contains whitespace or brackets")]
    BadName(String),
    #[error("dual list does not match the simples")]
    DualShape,
    #[error("duality is not an involution at `{0}`")]
    DualNotInvolutive(String),
    #[error("the unit must be self-dual")]
    UnitNotSelfDual,
    #[error("unit is not neutral in the product `{0} · {1}`")]
    NotUnital(String, String),
    #[error("coefficient of the unit in `{0} · {1}` must be 1 exactly when the factors are dual")]
    UnitCoefficient(String, String),
    #[error("structure constants are not associative at (`{0}`, `{1}`, `{2}`)")]
    NotAssociative(String, String, String),
}

#[derive(Error, Debug)]
pub enum TableLoadError {
    #[error(transparent)]
    Shape(serde_json::Error),
    #[error(transparent)]
    Invalid(FusionTableError),
}

/// A fusion ring given by structure constants `N^z_{xy}`. The first listed
/// simple is the unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionTable {
    names: Vec<String>,
    dual: Vec<usize>,
    coeffs: BTreeMap<(usize, usize, usize), BigUint>,
}

impl FusionTable {
    pub const UNIT: usize = 0;

    /// Builds a table and verifies duality, unitality, the unit-coefficient
    /// law `N^1_{xy} = [y = x*]`, and associativity of the structure
    /// constants. Unit rows and columns may be omitted from `coeffs`; they
    /// are filled in.
    pub fn from_parts(
        names: Vec<String>,
        dual: Vec<usize>,
        mut coeffs: BTreeMap<(usize, usize, usize), BigUint>,
    ) -> Result<Self, FusionTableError> {
        let n = names.len();
        if n == 0 {
            return Err(FusionTableError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty()
                || name.chars().any(|c| c.is_whitespace() || c == '[' || c == ']')
                || names[..i].contains(name)
            {
                return Err(FusionTableError::BadName(name.clone()));
            }
        }
        if dual.len() != n || dual.iter().any(|&d| d >= n) {
            return Err(FusionTableError::DualShape);
        }
        for x in 0..n {
            if dual[dual[x]] != x {
                return Err(FusionTableError::DualNotInvolutive(names[x].clone()));
            }
        }
        if dual[Self::UNIT] != Self::UNIT {
            return Err(FusionTableError::UnitNotSelfDual);
        }
        coeffs.retain(|_, c| !c.is_zero());
        // Fill in omitted unit rows/columns.
        for y in 0..n {
            if !coeffs.keys().any(|&(a, b, _)| a == Self::UNIT && b == y) {
                coeffs.insert((Self::UNIT, y, y), BigUint::one());
            }
            if !coeffs.keys().any(|&(a, b, _)| a == y && b == Self::UNIT) {
                coeffs.insert((y, Self::UNIT, y), BigUint::one());
            }
        }
        let table = FusionTable { names, dual, coeffs };
        table.verify()?;
        Ok(table)
    }

    fn verify(&self) -> Result<(), FusionTableError> {
        let n = self.len();
        let name = |i: usize| self.names[i].clone();
        for x in 0..n {
            for y in 0..n {
                let unital_ok = |got: &[(usize, BigUint)], expect: usize| {
                    got.len() == 1 && got[0].0 == expect && got[0].1.is_one()
                };
                if x == Self::UNIT && !unital_ok(&self.product(x, y), y) {
                    return Err(FusionTableError::NotUnital(name(x), name(y)));
                }
                if y == Self::UNIT && !unital_ok(&self.product(x, y), x) {
                    return Err(FusionTableError::NotUnital(name(x), name(y)));
                }
                let unit_coeff = self.coeff(x, y, Self::UNIT);
                let expect =
                    if y == self.dual[x] { BigUint::one() } else { BigUint::zero() };
                if unit_coeff != expect {
                    return Err(FusionTableError::UnitCoefficient(name(x), name(y)));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for u in 0..n {
                        let mut left = BigUint::zero();
                        let mut right = BigUint::zero();
                        for w in 0..n {
                            left += self.coeff(x, y, w) * self.coeff(w, z, u);
                            right += self.coeff(y, z, w) * self.coeff(x, w, u);
                        }
                        if left != right {
                            return Err(FusionTableError::NotAssociative(
                                name(x),
                                name(y),
                                name(z),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn coeff(&self, x: usize, y: usize, z: usize) -> BigUint {
        self.coeffs.get(&(x, y, z)).cloned().unwrap_or_else(BigUint::zero)
    }

    /// The decomposition of `x · y` as `(simple, multiplicity)` pairs.
    pub fn product(&self, x: usize, y: usize) -> Vec<(usize, BigUint)> {
        self.coeffs
            .range((x, y, 0)..=(x, y, usize::MAX))
            .map(|(&(_, _, z), c)| (z, c.clone()))
            .collect()
    }

    pub fn dual(&self, x: usize) -> usize {
        self.dual[x]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parses `{"kind":"table","simples":[..],"dual":[..],"N":{"x":{"y":{"z":n}}}}`.
    /// The first simple is the unit; `dual` lists the dual of each simple by
    /// name.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, TableLoadError> {
        #[derive(serde::Deserialize)]
        struct TableJson {
            simples: Vec<String>,
            dual: Vec<String>,
            #[serde(rename = "N", default)]
            n: BTreeMap<String, BTreeMap<String, BTreeMap<String, u64>>>,
        }
        let parsed: TableJson =
            serde_json::from_value(value.clone()).map_err(TableLoadError::Shape)?;
        let index = |name: &str| {
            parsed.simples.iter().position(|s| s == name).ok_or_else(|| {
                TableLoadError::Shape(serde_json::Error::custom(format!(
                    "unknown simple `{name}`"
                )))
            })
        };
        let dual: Result<Vec<usize>, _> = parsed.dual.iter().map(|d| index(d)).collect();
        let mut coeffs = BTreeMap::new();
        for (x, row) in &parsed.n {
            for (y, cell) in row {
                for (z, &c) in cell {
                    coeffs.insert((index(x)?, index(y)?, index(z)?), BigUint::from(c));
                }
            }
        }
        Self::from_parts(parsed.simples, dual?, coeffs).map_err(TableLoadError::Invalid)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut n: BTreeMap<String, BTreeMap<String, BTreeMap<String, u64>>> = BTreeMap::new();
        for (&(x, y, z), c) in &self.coeffs {
            n.entry(self.names[x].clone())
                .or_default()
                .entry(self.names[y].clone())
                .or_default()
                .insert(self.names[z].clone(), c.try_into().unwrap_or(u64::MAX));
        }
        let dual: Vec<&str> = self.dual.iter().map(|&d| self.names[d].as_str()).collect();
        serde_json::json!({
            "kind": "table",
            "simples": self.names,
            "dual": dual,
            "N": n,
        })
    }
}

/// The character ring of the symmetric group on three letters: unit, sign,
/// and the two-dimensional standard representation.
pub fn rep_s3() -> FusionTable {
    let one = BigUint::one();
    let coeffs = [
        ((1, 1, 0), one.clone()),
        ((1, 2, 2), one.clone()),
        ((2, 1, 2), one.clone()),
        ((2, 2, 0), one.clone()),
        ((2, 2, 1), one.clone()),
        ((2, 2, 2), one),
    ]
    .into_iter()
    .collect();
    FusionTable::from_parts(
        vec!["1".into(), "sgn".into(), "std".into()],
        vec![0, 1, 2],
        coeffs,
    )
    .expect("Rep(S3) structure constants verify")
}
