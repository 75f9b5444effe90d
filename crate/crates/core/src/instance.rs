//! JSON instance files.
//!
//! ```json
//! {
//!   "grid": { "dimension": 1, "cell_measures": [0.5, 0.5] },
//!   "p": [2.0, 4.0],
//!   "q": [1.5, 3.0],
//!   "components": [[1.0, -2.0], [0.0, 0.5]],
//!   "quasi": false,
//!   "metadata": { "seed": 42, "description": "..." }
//! }
//! ```
//!
//! `quasi` and `metadata` are optional. Without `quasi: true` every exponent
//! must exceed 1. Floats are written in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::grid::{ExponentField, FunctionSequence, Grid};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}{message}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid { line: Option<usize>, message: String },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    dimension: usize,
    cell_measures: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    grid: GridDoc,
    p: Vec<f64>,
    q: Vec<f64>,
    components: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    quasi: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
}

/// A sequence with its exponents, as stored in an instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub f: FunctionSequence,
    pub p: ExponentField,
    pub q: ExponentField,
    pub metadata: Metadata,
}

impl Instance {
    pub fn new(f: FunctionSequence, p: ExponentField, q: ExponentField) -> Self {
        Instance {
            f,
            p,
            q,
            metadata: Metadata::default(),
        }
    }

    pub fn is_quasi(&self) -> bool {
        !(self.p.is_normable() && self.q.is_normable())
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            grid: GridDoc {
                dimension: self.f.grid().dimension(),
                cell_measures: self.f.grid().measures().to_vec(),
            },
            p: self.p.values().to_vec(),
            q: self.q.values().to_vec(),
            components: self.f.components().iter().map(|c| c.values().to_vec()).collect(),
            quasi: self.is_quasi(),
            metadata: (self.metadata != Metadata::default()).then(|| self.metadata.clone()),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let invalid = |key: &str, e: Error| InstanceError::Invalid {
            line: key_line(text, key),
            message: e.to_string(),
        };
        let grid = Grid::new(doc.grid.dimension, doc.grid.cell_measures).map_err(|e| invalid("grid", e))?;
        let exponent = |key: &str, values: Vec<f64>| {
            let field = if doc.quasi {
                ExponentField::relaxed(&grid, values)
            } else {
                ExponentField::new(&grid, values)
            };
            field.map_err(|e| match e {
                Error::InvalidExponent {
                    index, value, reason, ..
                } => InstanceError::Invalid {
                    line: key_line(text, key),
                    message: format!("{key}[{index}] = {value}: {reason}"),
                },
                e => invalid(key, e),
            })
        };
        let p = exponent("p", doc.p)?;
        let q = exponent("q", doc.q)?;
        let f = FunctionSequence::from_values(&grid, doc.components).map_err(|e| invalid("components", e))?;
        Ok(Instance {
            f,
            p,
            q,
            metadata: doc.metadata.unwrap_or_default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path).map_err(|e| InstanceError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }
}

/// Line of the first `"key"` in `text`, 1-based.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}
