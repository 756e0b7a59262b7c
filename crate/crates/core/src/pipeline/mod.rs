//! End-to-end orchestration: data generation or ingestion, similarity graphs,
//! suite selection and statistical reports, plus the files each step writes.
//!
//! Every stage is computed in memory first; files are written only once the
//! whole command has succeeded, so a failing run leaves no partial reports.

pub mod config;
pub mod report;
pub mod stages;

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

pub use config::{threshold_tag, ClusterConfig, HarnessConfig, HeuristicChoice, KRange, PipelineConfig};
pub use report::{build_report, Discrepancy, PairCell, Report, SelectionSummary, SuiteSummary};
pub use stages::{
    build_graphs, cluster_selection, generate_dataset, load_dataset, select_all, ClusterSelection, Dataset,
    GraphArtifact, Selections,
};

use crate::dsc_stats::FRIEDMAN_MIN_INSTANCES;
use crate::error::{Error, Result};

/// What a command wrote and the warnings it raised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Pending file contents, flushed in one go.
#[derive(Default)]
struct Writer {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Writer {
    fn text(&mut self, path: PathBuf, text: String) {
        self.files.push((path, text.into_bytes()));
    }

    fn json<T: Serialize>(&mut self, path: PathBuf, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(path, s);
        Ok(())
    }

    fn flush(self, outcome: &mut Outcome) -> Result<()> {
        for (path, bytes) in self.files {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
            outcome.written.push(path);
        }
        Ok(())
    }
}

fn out_path(config: &PipelineConfig, rel: &str) -> PathBuf {
    config.out.join(rel)
}

fn finish(config: &PipelineConfig, writer: Writer, warnings: Vec<String>) -> Result<Outcome> {
    for w in &warnings {
        log::warn!("{w}");
    }
    if config.strict && !warnings.is_empty() {
        return Err(Error::Precondition(warnings.join("; ")));
    }
    let mut outcome = Outcome {
        written: Vec::new(),
        warnings,
    };
    let mut writer = writer;
    writer.json(out_path(config, "run_config.json"), config)?;
    writer.flush(&mut outcome)?;
    Ok(outcome)
}

fn stage_dataset(config: &PipelineConfig, dataset: &Dataset, writer: &mut Writer) -> Result<()> {
    writer.text(out_path(config, "features.csv"), dataset.features.to_csv_string()?);
    writer.text(out_path(config, "performance.csv"), dataset.performance.to_csv_string()?);
    writer.json(
        out_path(config, "extraction.json"),
        &json!({
            "config": config,
            "instances": dataset.features.n_rows(),
            "features": dataset.features.feature_names(),
            "failures": dataset.extraction_failures,
            "clamped_proposals": dataset.clamped_proposals,
        }),
    )
}

fn stage_graphs(config: &PipelineConfig, graphs: &[GraphArtifact], writer: &mut Writer) -> Result<()> {
    let meta = json!({ "config": config });
    let mut summary = Vec::new();
    for g in graphs {
        let tag = threshold_tag(g.graph.threshold());
        let mut buf = Vec::new();
        g.graph.write_edge_list(&mut buf, Some(&meta))?;
        writer.files.push((out_path(config, &format!("graphs/graph_{tag}.edges")), buf));
        writer.text(out_path(config, &format!("graphs/degrees_{tag}.csv")), g.degrees.ecdf_csv());
        summary.push(json!({
            "threshold": g.graph.threshold(),
            "nodes": g.graph.n_nodes(),
            "edges": g.graph.n_edges(),
            "components": g.components,
            "degree_min": g.degrees.min,
            "degree_max": g.degrees.max,
            "degree_mean": g.degrees.mean,
        }));
    }
    writer.json(out_path(config, "graphs/summary.json"), &json!({ "config": config, "graphs": summary }))
}

fn labels(keys: &[crate::datamodel::InstanceKey]) -> Vec<String> {
    keys.iter().map(|k| k.label()).collect()
}

fn selection_warnings(selections: &Selections) -> Vec<String> {
    let mut warnings = Vec::new();
    for b in &selections.batches {
        let small = b.runs.iter().filter(|r| r.len() < FRIEDMAN_MIN_INSTANCES).count();
        if small > 0 {
            warnings.push(format!(
                "{} {}: {small} of {} suites below Friedman minimum ({FRIEDMAN_MIN_INSTANCES} instances)",
                b.heuristic.to_string().to_uppercase(),
                threshold_tag(b.threshold),
                b.runs.len()
            ));
        }
    }
    if let Some(c) = &selections.cluster {
        if c.model.k < FRIEDMAN_MIN_INSTANCES {
            warnings.push(format!(
                "cluster: {} clusters per suite, below Friedman minimum ({FRIEDMAN_MIN_INSTANCES} instances)",
                c.model.k
            ));
        }
    }
    warnings
}

fn stage_selections(config: &PipelineConfig, selections: &Selections, writer: &mut Writer) -> Result<()> {
    for b in &selections.batches {
        let tag = threshold_tag(b.threshold);
        let h = b.heuristic;
        for (idx, run) in b.runs.iter().enumerate() {
            writer.json(
                out_path(config, &format!("selections/{h}_{tag}_seed{idx:02}.json")),
                &json!({
                    "heuristic": h,
                    "threshold": b.threshold,
                    "seed": run.seed,
                    "instances": labels(&run.selected),
                    "config": config,
                }),
            )?;
        }
        writer.json(
            out_path(config, &format!("selections/{h}_{tag}_summary.json")),
            &json!({
                "heuristic": h,
                "threshold": b.threshold,
                "runs": b.runs.len(),
                "sizes": b.sizes,
                "seeds": b.runs.iter().map(|r| r.seed).collect::<Vec<_>>(),
                "config": config,
            }),
        )?;
    }
    if let Some(c) = &selections.cluster {
        writer.text(out_path(config, "clusters.csv"), c.model.assignments_csv());
        writer.json(
            out_path(config, "selections/cluster_suites.json"),
            &json!({
                "heuristic": "cluster",
                "k": c.k,
                "clusters": c.model.k,
                "sub_split": config.cluster.sub_split,
                "pool_fraction": config.cluster.pool_fraction,
                "silhouettes": c.silhouettes,
                "seed": c.seed,
                "centroid_suite": labels(&c.centroid_suite),
                "pools": c.pools.iter().map(|p| labels(p)).collect::<Vec<_>>(),
                "suites": c.suites.iter().map(|s| labels(s)).collect::<Vec<_>>(),
                "config": config,
            }),
        )?;
    }
    Ok(())
}

fn stage_report(config: &PipelineConfig, report: &Report, writer: &mut Writer) -> Result<()> {
    writer.json(out_path(config, "report.json"), report)?;
    let mut md = report.to_markdown();
    md.push_str("\n<details><summary>Configuration</summary>\n\n```json\n");
    md.push_str(&serde_json::to_string_pretty(config)?);
    md.push_str("\n```\n\n</details>\n");
    writer.text(out_path(config, "report.md"), md);
    Ok(())
}

/// Generates harness data and writes `features.csv` and `performance.csv`.
///
/// Fails with a feature error after writing when any instance was dropped.
pub fn cmd_extract(config: &PipelineConfig) -> Result<Outcome> {
    config.validate()?;
    if config.uses_files() {
        return Err(Error::Config("extract generates data with the harness; do not pass input tables".into()));
    }
    let dataset = generate_dataset(config)?;
    let mut writer = Writer::default();
    stage_dataset(config, &dataset, &mut writer)?;
    let outcome = finish(config, writer, Vec::new())?;
    if !dataset.extraction_failures.is_empty() {
        let list: Vec<String> = dataset
            .extraction_failures
            .iter()
            .map(|f| format!("{} (repetition {}): {}", f.key, f.repetition, f.diagnostic))
            .collect();
        return Err(Error::Feature(format!("dropped instances: {}", list.join("; "))));
    }
    Ok(outcome)
}

/// Similarity graphs, degree ECDFs and component counts per threshold.
pub fn cmd_build_graph(config: &PipelineConfig) -> Result<Outcome> {
    let dataset = load_dataset(config)?;
    let graphs = build_graphs(&dataset.features, config)?;
    let mut writer = Writer::default();
    stage_graphs(config, &graphs, &mut writer)?;
    finish(config, writer, Vec::new())
}

/// Selection files per heuristic, threshold and seed, plus summaries.
pub fn cmd_select(config: &PipelineConfig) -> Result<Outcome> {
    let dataset = load_dataset(config)?;
    let graphs = build_graphs(&dataset.features, config)?;
    let selections = select_all(&dataset.features, &graphs, config)?;
    let warnings = selection_warnings(&selections);
    let mut writer = Writer::default();
    stage_selections(config, &selections, &mut writer)?;
    finish(config, writer, warnings)
}

/// `report.json` and `report.md`. Selections are recomputed from the
/// configuration, which makes them identical to those `select` writes.
pub fn cmd_compare(config: &PipelineConfig) -> Result<Outcome> {
    let dataset = load_dataset(config)?;
    let graphs = build_graphs(&dataset.features, config)?;
    let selections = select_all(&dataset.features, &graphs, config)?;
    let report = build_report(&dataset, &selections, config)?;
    let mut writer = Writer::default();
    stage_report(config, &report, &mut writer)?;
    finish(config, writer, report.warnings.clone())
}

/// Every stage, writing all artifacts.
pub fn cmd_pipeline(config: &PipelineConfig) -> Result<Outcome> {
    let dataset = load_dataset(config)?;
    let graphs = build_graphs(&dataset.features, config)?;
    let selections = select_all(&dataset.features, &graphs, config)?;
    let report = build_report(&dataset, &selections, config)?;
    let mut warnings = report.warnings.clone();
    for f in &dataset.extraction_failures {
        warnings.push(format!("dropped {}: {}", f.key, f.diagnostic));
    }
    let mut writer = Writer::default();
    stage_dataset(config, &dataset, &mut writer)?;
    stage_graphs(config, &graphs, &mut writer)?;
    stage_selections(config, &selections, &mut writer)?;
    stage_report(config, &report, &mut writer)?;
    finish(config, writer, warnings)
}

/// Lists every file below `root` relative to it, sorted.
pub fn list_tree(root: &Path) -> Result<Vec<PathBuf>> {
    fn walk(dir: &Path, root: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
        for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.is_dir() {
                walk(&path, root, out)?;
            } else {
                out.push(path.strip_prefix(root).expect("below root").to_path_buf());
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(root, root, &mut out)?;
    out.sort();
    Ok(out)
}
