//! Finite group backends: every simple is grouplike and the product of two
//! simples is again a single simple.

use serde::de::Error as _;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupTableError {
    #[error("multiplication table is not square or references an element out of range")]
    Shape,
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element `{0}` has no two-sided inverse")]
    NoInverse(String),
    #[error("table is not associative at (`{0}`, `{1}`, `{2}`)")]
    NotAssociative(String, String, String),
    #[error("element name `{0}` is empty or contains whitespace or brackets")]
    BadName(String),
}

#[derive(Error, Debug)]
pub enum GroupLoadError {
    #[error(transparent)]
    Shape(serde_json::Error),
    #[error(transparent)]
    Invalid(GroupTableError),
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Builds and verifies a group table; `names` defaults to `g0..g{n-1}`.
    pub fn from_parts(
        names: Option<Vec<String>>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupTableError> {
        let n = table.len();
        let names = match names {
            Some(ns) if ns.len() == n => ns,
            None => (0..n).map(|i| format!("g{i}")).collect(),
            Some(_) => return Err(GroupTableError::Shape),
        };
        if n == 0 {
            return Err(GroupTableError::Shape);
        }
        for name in &names {
            if name.is_empty()
                || name.chars().any(|c| c.is_whitespace() || c == '[' || c == ']')
            {
                return Err(GroupTableError::BadName(name.clone()));
            }
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(GroupTableError::Shape);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupTableError::NoIdentity)?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| GroupTableError::NoInverse(names[x].clone()))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupTableError::NotAssociative(
                            names[a].clone(),
                            names[b].clone(),
                            names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(GroupTable { names, table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A generator of the group when it is cyclic, together with the discrete
    /// logarithm of every element with respect to it.
    pub fn cyclic_generator(&self) -> Option<(usize, Vec<i64>)> {
        let n = self.order();
        'candidates: for g in 0..n {
            let mut dlog = vec![-1i64; n];
            let mut cur = self.identity;
            for k in 0..n {
                if dlog[cur] >= 0 {
                    continue 'candidates;
                }
                dlog[cur] = k as i64;
                cur = self.mul(cur, g);
            }
            if cur == self.identity {
                return Some((g, dlog));
            }
        }
        None
    }

    /// Parses `{"kind":"group","order":n,"table":[[..]],"names":[..]}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, GroupLoadError> {
        #[derive(serde::Deserialize)]
        struct GroupJson {
            order: usize,
            table: Vec<Vec<usize>>,
            #[serde(default)]
            names: Option<Vec<String>>,
        }
        let parsed: GroupJson =
            serde_json::from_value(value.clone()).map_err(GroupLoadError::Shape)?;
        if parsed.table.len() != parsed.order {
            return Err(GroupLoadError::Shape(serde_json::Error::custom(format!(
                "declared order {} does not match table size {}",
                parsed.order,
                parsed.table.len()
            ))));
        }
        Self::from_parts(parsed.names, parsed.table).map_err(GroupLoadError::Invalid)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "group",
            "order": self.order(),
            "table": self.table,
            "names": self.names,
        })
    }
}

/// The cyclic group of order `n` with elements `e, g, g^2, ...`.
pub fn cyclic_group(n: usize) -> GroupTable {
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_owned(),
            1 => "g".to_owned(),
            _ => format!("g{i}"),
        })
        .collect();
    GroupTable::from_parts(Some(names), table).expect("cyclic table is a group")
}

/// The Klein four-group (smallest non-cyclic group).
pub fn klein_group() -> GroupTable {
    let table = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    GroupTable::from_parts(Some(vec!["e".into(), "x".into(), "y".into(), "xy".into()]), table)
        .expect("klein table is a group")
}
