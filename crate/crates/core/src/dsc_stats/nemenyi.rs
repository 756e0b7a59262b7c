use serde::{Deserialize, Serialize};

use super::distributions::studentized_range_sf;
use super::ranking::RankingMatrix;
use crate::error::{Error, Result};

/// Outcome of one pairwise post-hoc comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseOutcome {
    pub first: String,
    pub second: String,
    pub p_value: f64,
    pub significant: bool,
    pub alpha: f64,
}

impl PairwiseOutcome {
    pub fn new(first: String, second: String, p_value: f64, alpha: f64) -> Self {
        Self {
            first,
            second,
            p_value,
            significant: p_value < alpha,
            alpha,
        }
    }

    /// 1 = no significant difference, 0 = significant difference.
    pub fn bit(&self) -> u8 {
        u8::from(!self.significant)
    }

    /// `p/bit` cell, e.g. `0.33/1`.
    pub fn cell(&self) -> String {
        format!("{:.2}/{}", self.p_value, self.bit())
    }
}

/// Nemenyi p-value for a mean-rank difference with `k` algorithms over `n`
/// instances.
pub fn nemenyi_p_value(mean_rank_diff: f64, k: usize, n: usize) -> f64 {
    let se = (k as f64 * (k as f64 + 1.0) / (6.0 * n as f64)).sqrt();
    let q = mean_rank_diff.abs() / se;
    studentized_range_sf(q * std::f64::consts::SQRT_2, k)
}

/// All pairs `(i, j)`, `i < j`, in row-major order.
pub fn nemenyi_posthoc(ranks: &RankingMatrix, alpha: f64) -> Result<Vec<PairwiseOutcome>> {
    let k = ranks.n_algorithms();
    let n = ranks.n_instances();
    if k < 2 || n < 1 {
        return Err(Error::Domain(format!(
            "Nemenyi test needs k >= 2 algorithms and N >= 1 instances, got k={k}, N={n}"
        )));
    }
    let means = ranks.mean_ranks();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let p = nemenyi_p_value(means[i] - means[j], k, n);
            out.push(PairwiseOutcome::new(
                ranks.algorithms[i].clone(),
                ranks.algorithms[j].clone(),
                p,
                alpha,
            ));
        }
    }
    Ok(out)
}
