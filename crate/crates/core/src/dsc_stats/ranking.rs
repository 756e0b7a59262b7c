use serde::{Deserialize, Serialize};

use super::dsc::dsc_rank_instance;
use crate::datamodel::{InstanceKey, PerformanceTable};
use crate::error::{Error, Result};

/// Instances × algorithms matrix of DSC fractional ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingMatrix {
    pub instances: Vec<InstanceKey>,
    pub algorithms: Vec<String>,
    pub ranks: Vec<Vec<f64>>,
}

impl RankingMatrix {
    pub fn n_instances(&self) -> usize {
        self.ranks.len()
    }

    pub fn n_algorithms(&self) -> usize {
        self.algorithms.len()
    }

    /// Column rank sums `R_j`.
    pub fn rank_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_algorithms()];
        for row in &self.ranks {
            for (s, r) in sums.iter_mut().zip(row) {
                *s += r;
            }
        }
        sums
    }

    pub fn mean_ranks(&self) -> Vec<f64> {
        let n = self.n_instances() as f64;
        self.rank_sums().into_iter().map(|s| s / n).collect()
    }
}

/// One DSC row per suite instance, in suite order, over all algorithms of
/// `perf`.
pub fn build_ranking_matrix(
    perf: &PerformanceTable,
    suite: &[InstanceKey],
    alpha: f64,
) -> Result<RankingMatrix> {
    let algorithms = perf.algorithms().to_vec();
    let mut ranks = Vec::with_capacity(suite.len());
    for key in suite {
        let runs = algorithms
            .iter()
            .map(|alg| {
                perf.runs(key, alg).ok_or_else(|| {
                    Error::Coverage(format!("no runs for instance {key} and algorithm {alg}"))
                })
            })
            .collect::<Result<Vec<&[f64]>>>()?;
        ranks.push(dsc_rank_instance(&runs, alpha)?);
    }
    Ok(RankingMatrix {
        instances: suite.to_vec(),
        algorithms,
        ranks,
    })
}
