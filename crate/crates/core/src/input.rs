//! JSON group descriptions.
//!
//! ```json
//! {"kind": "permutations", "degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}
//! {"kind": "table", "mult": [[0, 1], [1, 0]], "labels": ["1", "a"]}
//! {"kind": "catalog", "name": "D10"}
//! {"kind": "central_product", "left": {...}, "right": {...}, "pairing": [[0, 0], [2, 2]]}
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::catalog;
use crate::construct::{external_central_product_with, group_from_permutations_with};
use crate::error::{Error, Result};
use crate::group::{GroupTable, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Permutations {
        degree: Option<usize>,
        generators: Vec<Vec<usize>>,
    },
    Table {
        mult: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    },
    Catalog {
        name: String,
    },
    CentralProduct {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
        pairing: Vec<(usize, usize)>,
    },
}

impl GroupSpec {
    pub fn build(&self, limits: &Limits) -> Result<GroupTable> {
        match self {
            GroupSpec::Permutations { degree, generators } => {
                if let Some(d) = degree {
                    if let Some(bad) = generators.iter().position(|p| p.len() != *d) {
                        return Err(Error::Parse(format!(
                            "generator {bad} does not have degree {d}"
                        )));
                    }
                }
                group_from_permutations_with(generators, limits)
            }
            GroupSpec::Table { mult, labels } => {
                GroupTable::from_table_with(mult, labels.clone(), limits)
            }
            GroupSpec::Catalog { name } => {
                let family = catalog::parse_name(name)?;
                if family.order() > limits.max_order {
                    return Err(Error::OrderLimitExceeded {
                        limit: limits.max_order,
                    });
                }
                family.build()
            }
            GroupSpec::CentralProduct {
                left,
                right,
                pairing,
            } => {
                let m = left.build(limits)?;
                let n = right.build(limits)?;
                Ok(external_central_product_with(&m, &n, pairing, limits)?.group)
            }
        }
    }
}

pub fn parse_group_json(text: &str, limits: &Limits) -> Result<GroupTable> {
    let spec: GroupSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.build(limits)
}

pub fn read_group_file(path: &Path, limits: &Limits) -> Result<GroupTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_group_json(&text, limits)
}

/// A catalog name, or a path to a JSON group file when the argument names an
/// existing file or ends in `.json`.
pub fn resolve_group(arg: &str, limits: &Limits) -> Result<GroupTable> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".json") {
        return read_group_file(path, limits);
    }
    let family = catalog::parse_name(arg)?;
    if family.order() > limits.max_order {
        return Err(Error::OrderLimitExceeded {
            limit: limits.max_order,
        });
    }
    family.build()
}
