use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identity of one benchmark problem instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InstanceKey {
    pub suite: String,
    pub problem_id: u32,
    pub instance_id: u32,
    pub dimension: u32,
}

impl InstanceKey {
    pub fn new(
        suite: impl Into<String>,
        problem_id: u32,
        instance_id: u32,
        dimension: u32,
    ) -> Result<Self> {
        let suite = suite.into();
        if suite.is_empty() {
            return Err(Error::Domain("instance suite must be non-empty".into()));
        }
        if problem_id == 0 || instance_id == 0 || dimension == 0 {
            return Err(Error::Domain(format!(
                "instance ids must be positive, got {suite}/{problem_id}/{instance_id}/{dimension}"
            )));
        }
        Ok(Self {
            suite,
            problem_id,
            instance_id,
            dimension,
        })
    }

    /// `SUITE_problem_instance`, the label used in graph and selection exports.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for InstanceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.suite, self.problem_id, self.instance_id)
    }
}

/// Parses the four key cells of a CSV record (row numbers are 1-based data rows).
pub(crate) fn parse_key(cells: &[&str], row: usize) -> Result<InstanceKey> {
    let suite = cells[0].trim();
    if suite.is_empty() {
        return Err(Error::Parse {
            row,
            column: "suite".into(),
            msg: "empty suite identifier".into(),
        });
    }
    let mut ids = [0u32; 3];
    for (slot, (cell, name)) in ids
        .iter_mut()
        .zip(cells[1..4].iter().zip(["problem_id", "instance_id", "dimension"]))
    {
        *slot = cell
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| Error::Parse {
                row,
                column: name.into(),
                msg: format!("expected a positive integer, got `{cell}`"),
            })?;
    }
    Ok(InstanceKey {
        suite: suite.to_string(),
        problem_id: ids[0],
        instance_id: ids[1],
        dimension: ids[2],
    })
}
