//! JSON configuration: a group, its twist and optional default truncation.
//!
//! ```json
//! {
//!   "group": {"family": "free_abelian", "rank": 2, "order": "lex"},
//!   "eta": {"type": "bilinear_q", "q": "2", "matrix": [[0, 0], [1, 0]]},
//!   "frontier": ["6", "6"]
//! }
//! ```

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use crate::crossed::{CrossedProduct, Twist};
use crate::error::{Error, Result};
use crate::group::{Group, GroupSpec};
use crate::scalar;
use crate::tower::{parse_exp, Exp};

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EtaSpec {
    Trivial,
    BilinearQ { q: String, matrix: Vec<Vec<i64>> },
    Table {
        #[serde(default)]
        base: Option<Box<EtaSpec>>,
        entries: Vec<TableEntry>,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct TableEntry {
    pub g: String,
    pub h: String,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Config {
    pub group: GroupSpec,
    #[serde(default)]
    pub eta: Option<EtaSpec>,
    /// Per-level working frontier for series evaluation.
    #[serde(default)]
    pub frontier: Option<Vec<String>>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn crossed_product(&self) -> Result<CrossedProduct> {
        let group = Group::new(self.group.clone())?;
        let twist = match &self.eta {
            None => Twist::Trivial,
            Some(spec) => build_twist(&group, spec)?,
        };
        CrossedProduct::new(group, twist)
    }

    pub fn frontier(&self) -> Result<Option<Vec<Exp>>> {
        self.frontier
            .as_ref()
            .map(|v| v.iter().map(|s| parse_exp(s)).collect::<Result<Vec<_>>>())
            .transpose()
    }
}

fn build_twist(group: &Group, spec: &EtaSpec) -> Result<Twist> {
    Ok(match spec {
        EtaSpec::Trivial => Twist::Trivial,
        EtaSpec::BilinearQ { q, matrix } => Twist::BilinearQ { q: scalar::parse(q)?, matrix: matrix.clone() },
        EtaSpec::Table { base, entries } => {
            let base = match base {
                Some(b) => build_twist(group, b)?,
                None => Twist::Trivial,
            };
            let mut map = HashMap::new();
            for e in entries {
                map.insert(
                    (group.parse_element(&e.g)?, group.parse_element(&e.h)?),
                    scalar::parse(&e.value)?,
                );
            }
            Twist::Table { base: Box::new(base), entries: map }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_config() {
        let c = Config::from_json(
            r#"{"group": {"family": "free_abelian", "rank": 2, "order": "lex"},
                "eta": {"type": "bilinear_q", "q": "2", "matrix": [[0,0],[1,0]]}}"#,
        )
        .unwrap();
        let cp = c.crossed_product().unwrap();
        let y = cp.parse("[y]").unwrap();
        let x = cp.parse("[x]").unwrap();
        assert_eq!(cp.mul(&y, &x).unwrap(), cp.mul(&x, &y).unwrap().scale(&scalar::int(2)));
    }

    #[test]
    fn bad_family_is_a_config_error() {
        assert!(matches!(Config::from_json(r#"{"group": {"family": "nope", "order": "lex"}}"#), Err(Error::Config(_))));
    }
}
