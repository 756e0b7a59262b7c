//! In-memory pipeline stages. Nothing here touches the output directory.

use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use crate::cluster_select::{
    agglomerative_cluster_with, centroid_representatives, choose_k_with, representative_pools,
    sample_suite, silhouette_sweep, split_largest_with, ClusterModel, ClusterOptions,
};
use crate::datamodel::{load_feature_table, load_performance_table, FeatureTable, InstanceKey, PerformanceTable};
use crate::ela_lite::{extract_features, ExtractionFailure, Objective};
use crate::error::{Error, Result};
use crate::graph_select::{run_batch, BatchResult};
use crate::harness::{harness_problems, run_experiment};
use crate::similarity::{build_graph, connected_components, degree_statistics, DegreeStatistics, SimilarityGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: FeatureTable,
    pub performance: PerformanceTable,
    pub extraction_failures: Vec<ExtractionFailure>,
    /// Out-of-bounds proposals clamped by the harness optimizers.
    pub clamped_proposals: Option<usize>,
}

/// Reads the configured tables, or generates them with the harness.
pub fn load_dataset(config: &PipelineConfig) -> Result<Dataset> {
    config.validate()?;
    match (&config.features, &config.performance) {
        (Some(f), Some(p)) => Ok(Dataset {
            features: load_feature_table(f, &config.drop_columns)?,
            performance: load_performance_table(p)?,
            extraction_failures: Vec::new(),
            clamped_proposals: None,
        }),
        _ => generate_dataset(config),
    }
}

pub fn generate_dataset(config: &PipelineConfig) -> Result<Dataset> {
    let h = &config.harness;
    let problems = harness_problems(h.dimension, h.rotated_instances, h.rotation_seed(config.seed));
    log::info!("running {} optimizers on {} problems", h.optimizers.len(), problems.len());
    let experiment = run_experiment(&problems, &h.optimizers, &h.experiment_config(config.seed))?;
    let objectives: Vec<&dyn Objective> = problems.iter().map(|p| p as &dyn Objective).collect();
    log::info!("extracting landscape features");
    let extraction = extract_features(&objectives, &h.extract_config(config.seed))?;
    Ok(Dataset {
        features: extraction.table,
        performance: experiment.table.clone(),
        extraction_failures: extraction.failures,
        clamped_proposals: Some(experiment.total_clamped()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphArtifact {
    pub graph: SimilarityGraph,
    pub degrees: DegreeStatistics,
    pub components: usize,
}

pub fn build_graphs(features: &FeatureTable, config: &PipelineConfig) -> Result<Vec<GraphArtifact>> {
    let table = config.scaling.apply(features);
    config
        .thresholds
        .iter()
        .map(|&t| {
            let graph = build_graph(&table, t)?;
            Ok(GraphArtifact {
                degrees: degree_statistics(&graph),
                components: connected_components(&graph).len(),
                graph,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSelection {
    pub k: usize,
    /// Silhouette per candidate k of the base clustering.
    pub silhouettes: Vec<(usize, f64)>,
    pub model: ClusterModel,
    pub centroid_suite: Vec<InstanceKey>,
    pub pools: Vec<Vec<InstanceKey>>,
    pub seed: u64,
    pub suites: Vec<Vec<InstanceKey>>,
}

pub fn cluster_selection(features: &FeatureTable, config: &PipelineConfig) -> Result<ClusterSelection> {
    let table = config.scaling.apply(features);
    let c = &config.cluster;
    let n = table.n_rows();
    let range = match c.k_range {
        Some(r) => r.to_range(),
        None => 2..=n.min(30),
    };
    if n < 2 || *range.end() > n {
        return Err(Error::Constraint(format!(
            "cluster range {}..={} does not fit {n} instances",
            range.start(),
            range.end()
        )));
    }
    let options = ClusterOptions {
        linkage: c.linkage,
        centroid: c.centroid,
    };
    let silhouettes = silhouette_sweep(&table, range.clone(), c.linkage)?;
    let k = choose_k_with(&table, range, c.min_total, c.linkage)?;
    let mut model = agglomerative_cluster_with(&table, k, options)?;
    if let Some(sub) = c.sub_split {
        model = split_largest_with(&table, &model, sub, options)?;
    }
    let centroid_suite = centroid_representatives(&table, &model)?;
    let pools = representative_pools(&table, &model, c.pool_fraction)?;
    let seed = config.cluster_seed();
    let suites = sample_suite(&pools, c.repetitions, seed)?;
    Ok(ClusterSelection {
        k,
        silhouettes,
        model,
        centroid_suite,
        pools,
        seed,
        suites,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selections {
    /// One batch per (graph heuristic, threshold), heuristics outermost.
    pub batches: Vec<BatchResult>,
    pub cluster: Option<ClusterSelection>,
}

pub fn select_all(features: &FeatureTable, graphs: &[GraphArtifact], config: &PipelineConfig) -> Result<Selections> {
    let seeds = config.graph_seeds();
    let mut batches = Vec::new();
    for h in config.graph_heuristics() {
        for g in graphs {
            batches.push(run_batch(&g.graph, h, &seeds)?);
        }
    }
    let cluster = if config.wants_cluster() {
        Some(cluster_selection(features, config)?)
    } else {
        None
    };
    Ok(Selections { batches, cluster })
}
