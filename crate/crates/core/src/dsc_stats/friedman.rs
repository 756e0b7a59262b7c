use serde::{Deserialize, Serialize};

use super::distributions::chi_square_sf;
use super::ranking::RankingMatrix;
use crate::error::{Error, Result};

/// Suites smaller than this are flagged as too small for a safe Friedman test.
pub const FRIEDMAN_MIN_INSTANCES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    pub n_instances: usize,
    pub n_algorithms: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Friedman omnibus test over a rank matrix:
/// `χ² = 12 / (N k (k+1)) Σ R_j² - 3 N (k+1)` against χ²(k-1).
pub fn friedman_test(ranks: &RankingMatrix) -> Result<FriedmanResult> {
    let n = ranks.n_instances();
    let k = ranks.n_algorithms();
    if n < 2 || k < 2 {
        return Err(Error::Domain(format!(
            "Friedman test needs N >= 2 instances and k >= 2 algorithms, got N={n}, k={k}"
        )));
    }
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = ranks.rank_sums().iter().map(|r| r * r).sum();
    let statistic = (12.0 / (nf * kf * (kf + 1.0)) * sum_sq - 3.0 * nf * (kf + 1.0)).max(0.0);
    let df = k - 1;
    let mut warnings = Vec::new();
    if n < FRIEDMAN_MIN_INSTANCES {
        warnings.push(format!(
            "below Friedman minimum: {n} instances < {FRIEDMAN_MIN_INSTANCES}"
        ));
    }
    Ok(FriedmanResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df as f64),
        n_instances: n,
        n_algorithms: k,
        warnings,
    })
}
