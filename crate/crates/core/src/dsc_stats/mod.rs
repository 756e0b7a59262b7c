//! DSC ranking, Friedman and Nemenyi tests, and robustness counting over
//! repeated suite selections.

mod compare;
pub mod distributions;
mod dsc;
mod friedman;
mod ks;
mod nemenyi;
pub mod quadrature;
mod ranking;

pub use compare::{
    compare_on_suite, robustness_count, PairCount, RobustnessParameters, RobustnessReport,
    SuiteAudit, SuiteComparison,
};
pub use dsc::{dsc_rank_instance, fractional_ranks};
pub use friedman::{friedman_test, FriedmanResult, FRIEDMAN_MIN_INSTANCES};
pub use ks::{ks_statistic, ks_two_sample, KsResult};
pub use nemenyi::{nemenyi_p_value, nemenyi_posthoc, PairwiseOutcome};
pub use ranking::{build_ranking_matrix, RankingMatrix};

/// Significance level used throughout unless configured otherwise.
pub const DEFAULT_ALPHA: f64 = 0.05;
