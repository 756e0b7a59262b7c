use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::friedman::{friedman_test, FriedmanResult};
use super::nemenyi::{nemenyi_posthoc, PairwiseOutcome};
use super::ranking::build_ranking_matrix;
use crate::datamodel::{InstanceKey, PerformanceTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteComparison {
    pub friedman: FriedmanResult,
    pub pairwise: Vec<PairwiseOutcome>,
    /// Post-hoc outcomes are always reported; this is false when the
    /// omnibus test did not reject at `alpha`.
    pub omnibus_rejected: bool,
    pub mean_ranks: Vec<f64>,
}

/// DSC ranking → Friedman → Nemenyi on one suite.
pub fn compare_on_suite(
    perf: &PerformanceTable,
    suite: &[InstanceKey],
    alpha: f64,
) -> Result<SuiteComparison> {
    let ranks = build_ranking_matrix(perf, suite, alpha)?;
    let friedman = friedman_test(&ranks)?;
    let pairwise = nemenyi_posthoc(&ranks, alpha)?;
    Ok(SuiteComparison {
        omnibus_rejected: friedman.p_value < alpha,
        mean_ranks: ranks.mean_ranks(),
        friedman,
        pairwise,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RobustnessParameters {
    pub heuristic: String,
    /// Similarity threshold or cluster configuration, rendered.
    pub setting: String,
    pub alpha: f64,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCount {
    pub first: String,
    pub second: String,
    /// Suites on which the pair showed no significant difference.
    pub no_significance: usize,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteAudit {
    pub size: usize,
    pub friedman_p: f64,
    pub omnibus_rejected: bool,
    pub p_values: Vec<f64>,
    pub bits: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub parameters: RobustnessParameters,
    pub repetitions: usize,
    pub counts: Vec<PairCount>,
    pub per_suite: Vec<SuiteAudit>,
}

impl RobustnessReport {
    pub fn with_parameters(mut self, parameters: RobustnessParameters) -> Self {
        self.parameters = parameters;
        self
    }
}

/// Counts, per algorithm pair, the suites on which Nemenyi finds no
/// significant difference.
pub fn robustness_count(
    perf: &PerformanceTable,
    suites: &[Vec<InstanceKey>],
    alpha: f64,
) -> Result<RobustnessReport> {
    if suites.is_empty() {
        return Err(Error::Domain("robustness count needs at least one suite".into()));
    }
    let comparisons = suites
        .par_iter()
        .map(|s| compare_on_suite(perf, s, alpha))
        .collect::<Result<Vec<_>>>()?;
    let mut counts: Vec<PairCount> = comparisons[0]
        .pairwise
        .iter()
        .map(|o| PairCount {
            first: o.first.clone(),
            second: o.second.clone(),
            no_significance: 0,
            repetitions: suites.len(),
        })
        .collect();
    let mut per_suite = Vec::with_capacity(suites.len());
    for (suite, cmp) in suites.iter().zip(&comparisons) {
        for (c, o) in counts.iter_mut().zip(&cmp.pairwise) {
            c.no_significance += usize::from(o.bit());
        }
        per_suite.push(SuiteAudit {
            size: suite.len(),
            friedman_p: cmp.friedman.p_value,
            omnibus_rejected: cmp.omnibus_rejected,
            p_values: cmp.pairwise.iter().map(|o| o.p_value).collect(),
            bits: cmp.pairwise.iter().map(PairwiseOutcome::bit).collect(),
            warnings: cmp.friedman.warnings.clone(),
        });
    }
    Ok(RobustnessReport {
        parameters: RobustnessParameters {
            alpha,
            ..Default::default()
        },
        repetitions: suites.len(),
        counts,
        per_suite,
    })
}
