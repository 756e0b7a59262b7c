use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cluster_select::{CentroidKind, Linkage};
use crate::ela_lite::{ExtractConfig, LHS_CANDIDATES};
use crate::error::{Error, Result};
use crate::graph_select::Heuristic;
use crate::harness::{default_portfolio, ExperimentConfig, OptimizerSpec};
use crate::rng::derive_seed;
use crate::similarity::Scaling;

/// Which selection heuristics a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicChoice {
    Cluster,
    Ds,
    Mis,
}

impl HeuristicChoice {
    pub const ALL: [HeuristicChoice; 3] = [HeuristicChoice::Cluster, HeuristicChoice::Ds, HeuristicChoice::Mis];

    pub fn graph(self) -> Option<Heuristic> {
        match self {
            HeuristicChoice::Cluster => None,
            HeuristicChoice::Ds => Some(Heuristic::DominatingSet),
            HeuristicChoice::Mis => Some(Heuristic::MaximalIndependentSet),
        }
    }

    /// Parses `cluster`, `ds`, `mis` or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<HeuristicChoice>> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Self::ALL.to_vec()),
            "cluster" => Ok(vec![HeuristicChoice::Cluster]),
            "ds" => Ok(vec![HeuristicChoice::Ds]),
            "mis" => Ok(vec![HeuristicChoice::Mis]),
            other => Err(Error::Config(format!(
                "unknown heuristic `{other}` (expected cluster, ds, mis or all)"
            ))),
        }
    }
}

impl fmt::Display for HeuristicChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicChoice::Cluster => "cluster",
            HeuristicChoice::Ds => "ds",
            HeuristicChoice::Mis => "mis",
        })
    }
}

/// Inclusive range of cluster counts, written `A-B` or `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange {
    pub min: usize,
    pub max: usize,
}

impl KRange {
    pub fn to_range(self) -> RangeInclusive<usize> {
        self.min..=self.max
    }
}

impl FromStr for KRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad cluster range `{s}`")))
        };
        let (min, max) = if let Some((a, b)) = s.split_once("..") {
            (parse(a)?, parse(b.trim_start_matches('='))?)
        } else if let Some((a, b)) = s.split_once('-') {
            (parse(a)?, parse(b)?)
        } else {
            let k = parse(s)?;
            (k, k)
        };
        if min < 2 || min > max {
            return Err(Error::Config(format!(
                "cluster range `{s}` must satisfy 2 <= min <= max"
            )));
        }
        Ok(Self { min, max })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterConfig {
    /// Cluster counts swept by silhouette; `None` means `2..=min(n, 30)`.
    pub k_range: Option<KRange>,
    pub min_total: usize,
    /// Re-cluster the largest cluster into this many sub-clusters.
    pub sub_split: Option<usize>,
    pub pool_fraction: f64,
    pub repetitions: usize,
    pub linkage: Linkage,
    pub centroid: CentroidKind,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        Self {
            k_range: None,
            min_total: 10,
            sub_split: None,
            pool_fraction: 0.25,
            repetitions: 15,
            linkage: Linkage::Average,
            centroid: CentroidKind::Mean,
        }
    }
}

/// Parameters for generating data with the built-in harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    pub dimension: usize,
    /// Rotated and shifted copies per base problem.
    pub rotated_instances: u32,
    pub optimizers: Vec<OptimizerSpec>,
    pub budget_per_dimension: usize,
    pub runs: usize,
    pub eps: f64,
    pub sample_factor: usize,
    pub feature_repetitions: usize,
    pub lhs_candidates: usize,
    pub drop_columns: Vec<String>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            dimension: 2,
            rotated_instances: 2,
            optimizers: default_portfolio(),
            budget_per_dimension: 2000,
            runs: 30,
            eps: 1e-8,
            sample_factor: 50,
            feature_repetitions: 30,
            lhs_candidates: LHS_CANDIDATES,
            drop_columns: vec!["ic.eps.s".into()],
        }
    }
}

/// Sub-seed tags: every stochastic stage gets its own stream.
pub(crate) const SEED_EXPERIMENT: u64 = 1;
pub(crate) const SEED_EXTRACT: u64 = 2;
pub(crate) const SEED_ROTATION: u64 = 3;
pub(crate) const SEED_GRAPH: u64 = 4;
pub(crate) const SEED_CLUSTER: u64 = 5;

impl HarnessConfig {
    pub fn experiment_config(&self, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            budget_per_dimension: self.budget_per_dimension,
            budget: None,
            runs: self.runs,
            eps: self.eps,
            master_seed: derive_seed(seed, &[SEED_EXPERIMENT]),
            trace: false,
        }
    }

    pub fn extract_config(&self, seed: u64) -> ExtractConfig {
        ExtractConfig {
            sample_factor: self.sample_factor,
            repetitions: self.feature_repetitions,
            seed: derive_seed(seed, &[SEED_EXTRACT]),
            drop_columns: self.drop_columns.clone(),
            lhs_candidates: self.lhs_candidates,
        }
    }

    pub fn rotation_seed(&self, seed: u64) -> u64 {
        derive_seed(seed, &[SEED_ROTATION])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Feature table to read; when unset (together with `performance`) the
    /// harness generates the data.
    pub features: Option<PathBuf>,
    pub performance: Option<PathBuf>,
    /// Columns removed when reading `features`.
    pub drop_columns: Vec<String>,
    pub harness: HarnessConfig,
    pub heuristics: Vec<HeuristicChoice>,
    pub thresholds: Vec<f64>,
    pub scaling: Scaling,
    pub cluster: ClusterConfig,
    pub graph_repetitions: usize,
    pub alpha: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Escalate statistical-precondition warnings to errors.
    pub strict: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            features: None,
            performance: None,
            drop_columns: Vec::new(),
            harness: HarnessConfig::default(),
            heuristics: HeuristicChoice::ALL.to_vec(),
            thresholds: vec![0.90, 0.95, 0.97],
            scaling: Scaling::Raw,
            cluster: ClusterConfig::default(),
            graph_repetitions: 30,
            alpha: 0.05,
            seed: 0,
            out: PathBuf::from("out"),
            strict: false,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid configuration: {e}")))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn uses_files(&self) -> bool {
        self.features.is_some() || self.performance.is_some()
    }

    pub fn graph_heuristics(&self) -> Vec<Heuristic> {
        self.heuristics.iter().filter_map(|h| h.graph()).collect()
    }

    pub fn wants_cluster(&self) -> bool {
        self.heuristics.contains(&HeuristicChoice::Cluster)
    }

    /// Seeds shared by every graph batch, one per repetition.
    pub fn graph_seeds(&self) -> Vec<u64> {
        (0..self.graph_repetitions as u64)
            .map(|r| derive_seed(self.seed, &[SEED_GRAPH, r]))
            .collect()
    }

    pub fn cluster_seed(&self) -> u64 {
        derive_seed(self.seed, &[SEED_CLUSTER])
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if let Some(t) = self.thresholds.iter().find(|t| !(**t > -1.0 && **t <= 1.0)) {
            return fail(format!("threshold {t} outside (-1, 1]"));
        }
        if self.thresholds.is_empty() && !self.graph_heuristics().is_empty() {
            return fail("graph heuristics need at least one threshold".into());
        }
        if self.heuristics.is_empty() {
            return fail("no selection heuristic configured".into());
        }
        if self.graph_repetitions == 0 || self.cluster.repetitions == 0 {
            return fail("repetitions must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return fail(format!("alpha {} outside (0, 1)", self.alpha));
        }
        let f = self.cluster.pool_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return fail(format!("pool fraction {f} outside (0, 1]"));
        }
        if self.cluster.sub_split == Some(0) {
            return fail("sub-split must be at least 1".into());
        }
        if self.features.is_some() != self.performance.is_some() {
            return fail("file input needs both a features and a performance table".into());
        }
        if !self.uses_files() {
            let h = &self.harness;
            if h.dimension == 0 || h.runs == 0 || h.feature_repetitions == 0 || h.sample_factor == 0 {
                return fail("harness dimension, runs, repetitions and sample factor must be positive".into());
            }
            if h.optimizers.len() < 2 {
                return fail("the harness needs at least two optimizers".into());
            }
        }
        Ok(())
    }
}

/// Renders a threshold with at least two decimals (`0.9` → `0.90`).
pub fn threshold_tag(t: f64) -> String {
    let s = format!("{t:.2}");
    if s.parse::<f64>().ok() == Some(t) {
        s
    } else {
        format!("{t}")
    }
}
