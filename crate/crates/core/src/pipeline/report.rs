use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::{threshold_tag, PipelineConfig};
use super::stages::{Dataset, Selections};
use crate::datamodel::{InstanceKey, PerformanceTable};
use crate::dsc_stats::{compare_on_suite, robustness_count, PairCount, RobustnessParameters, RobustnessReport, FRIEDMAN_MIN_INSTANCES};
use crate::error::Result;
use crate::graph_select::SizeStatistics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCell {
    pub first: String,
    pub second: String,
    pub p_value: f64,
    /// 1 = no significant difference.
    pub bit: u8,
}

impl PairCell {
    pub fn cell(&self) -> String {
        format!("{:.2}/{}", self.p_value, self.bit)
    }
}

/// Friedman + Nemenyi on one fixed instance set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub label: String,
    pub size: usize,
    pub friedman_statistic: f64,
    pub friedman_p: f64,
    pub omnibus_rejected: bool,
    pub mean_ranks: Vec<f64>,
    pub pairs: Vec<PairCell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn summarise(perf: &PerformanceTable, label: &str, suite: &[InstanceKey], alpha: f64) -> Result<SuiteSummary> {
    let cmp = compare_on_suite(perf, suite, alpha)?;
    Ok(SuiteSummary {
        label: label.to_string(),
        size: suite.len(),
        friedman_statistic: cmp.friedman.statistic,
        friedman_p: cmp.friedman.p_value,
        omnibus_rejected: cmp.omnibus_rejected,
        mean_ranks: cmp.mean_ranks,
        pairs: cmp
            .pairwise
            .iter()
            .map(|o| PairCell {
                first: o.first.clone(),
                second: o.second.clone(),
                p_value: o.p_value,
                bit: o.bit(),
            })
            .collect(),
        warnings: cmp.friedman.warnings,
    })
}

/// Repeated selections of one kind and their robustness counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSummary {
    pub label: String,
    pub heuristic: String,
    pub setting: String,
    pub suites: usize,
    pub sizes: SizeStatistics,
    /// Per-pair "no significance" counts; absent for a single suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<PairCount>>,
    /// Details when there is exactly one suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single: Option<SuiteSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robustness: Option<RobustnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// A pair whose outcome differs between benchmark families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub first: String,
    pub second: String,
    pub significant_in: Vec<String>,
    pub not_significant_in: Vec<String>,
    /// `count/repetitions` of "no significance" per selection, for contrast.
    pub selections: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub instances: usize,
    pub features: usize,
    pub algorithms: Vec<String>,
    pub benchmarks: Vec<(String, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dropped_instances: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clamped_proposals: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: PipelineConfig,
    pub dataset: DatasetSummary,
    pub full: SuiteSummary,
    pub per_benchmark: Vec<SuiteSummary>,
    pub discrepancies: Vec<Discrepancy>,
    pub selections: Vec<SelectionSummary>,
    pub warnings: Vec<String>,
}

fn size_stats(suites: &[Vec<InstanceKey>]) -> SizeStatistics {
    let sizes: Vec<usize> = suites.iter().map(Vec::len).collect();
    SizeStatistics {
        min: sizes.iter().copied().min().unwrap_or(0),
        max: sizes.iter().copied().max().unwrap_or(0),
        mean: sizes.iter().sum::<usize>() as f64 / sizes.len().max(1) as f64,
    }
}

fn selection_summary(
    perf: &PerformanceTable,
    label: String,
    heuristic: &str,
    setting: String,
    seeds: Vec<u64>,
    suites: &[Vec<InstanceKey>],
    alpha: f64,
    warnings: &mut Vec<String>,
) -> Result<SelectionSummary> {
    let sizes = size_stats(suites);
    let mut out = SelectionSummary {
        label: label.clone(),
        heuristic: heuristic.to_string(),
        setting: setting.clone(),
        suites: suites.len(),
        sizes,
        counts: None,
        single: None,
        robustness: None,
        skipped: None,
    };
    if out.sizes.min < 2 {
        let msg = format!("{label}: a suite has fewer than 2 instances, comparison skipped");
        warnings.push(msg.clone());
        out.skipped = Some(msg);
        return Ok(out);
    }
    let small = suites.iter().filter(|s| s.len() < FRIEDMAN_MIN_INSTANCES).count();
    if small > 0 {
        warnings.push(format!(
            "{label}: {small} of {} suites below Friedman minimum ({FRIEDMAN_MIN_INSTANCES} instances)",
            suites.len()
        ));
    }
    if suites.len() == 1 {
        out.single = Some(summarise(perf, &label, &suites[0], alpha)?);
        return Ok(out);
    }
    let report = robustness_count(perf, suites, alpha)?.with_parameters(RobustnessParameters {
        heuristic: heuristic.to_string(),
        setting,
        alpha,
        seeds,
    });
    out.counts = Some(report.counts.clone());
    out.robustness = Some(report);
    Ok(out)
}

/// Runs every comparison of the report.
pub fn build_report(dataset: &Dataset, selections: &Selections, config: &PipelineConfig) -> Result<Report> {
    let perf = &dataset.performance;
    let alpha = config.alpha;
    let mut warnings = Vec::new();
    let all_keys: Vec<InstanceKey> = dataset.features.keys().to_vec();

    let full = summarise(perf, "All", &all_keys, alpha)?;
    warnings.extend(full.warnings.iter().map(|w| format!("All: {w}")));

    let mut families: BTreeMap<&str, Vec<InstanceKey>> = BTreeMap::new();
    for k in &all_keys {
        families.entry(k.suite.as_str()).or_default().push(k.clone());
    }
    let mut per_benchmark = Vec::new();
    if families.len() > 1 {
        for (name, keys) in &families {
            if keys.len() < 2 {
                warnings.push(format!("{name}: only {} instance, comparison skipped", keys.len()));
                continue;
            }
            let s = summarise(perf, name, keys, alpha)?;
            warnings.extend(s.warnings.iter().map(|w| format!("{name}: {w}")));
            per_benchmark.push(s);
        }
    }

    let mut summaries = Vec::new();
    let seeds = config.graph_seeds();
    for batch in &selections.batches {
        let tag = threshold_tag(batch.threshold);
        let suites: Vec<Vec<InstanceKey>> = batch.runs.iter().map(|r| r.selected.clone()).collect();
        summaries.push(selection_summary(
            perf,
            format!("{} {tag}", batch.heuristic.to_string().to_uppercase()),
            &batch.heuristic.to_string(),
            tag,
            seeds.clone(),
            &suites,
            alpha,
            &mut warnings,
        )?);
    }
    if let Some(c) = &selections.cluster {
        let setting = format!("k={}", c.model.k);
        summaries.push(selection_summary(
            perf,
            format!("Centroids k={}", c.model.k),
            "cluster_centroid",
            setting.clone(),
            Vec::new(),
            std::slice::from_ref(&c.centroid_suite),
            alpha,
            &mut warnings,
        )?);
        summaries.push(selection_summary(
            perf,
            format!("Pools {}% k={}", config.cluster.pool_fraction * 100.0, c.model.k),
            "cluster_pool",
            format!("{setting} pool_fraction={}", config.cluster.pool_fraction),
            vec![c.seed],
            &c.suites,
            alpha,
            &mut warnings,
        )?);
    }

    let discrepancies = find_discrepancies(&full, &per_benchmark, &summaries);
    for d in &discrepancies {
        warnings.push(format!(
            "({}, {}): significant on {} but not on {}",
            d.first,
            d.second,
            d.significant_in.join(", "),
            d.not_significant_in.join(", ")
        ));
    }

    let mut benchmarks: Vec<(String, usize)> = families.iter().map(|(k, v)| (k.to_string(), v.len())).collect();
    benchmarks.sort();
    Ok(Report {
        config: config.clone(),
        dataset: DatasetSummary {
            instances: dataset.features.n_rows(),
            features: dataset.features.n_features(),
            algorithms: perf.algorithms().to_vec(),
            benchmarks,
            dropped_instances: dataset.extraction_failures.iter().map(|f| format!("{}: {}", f.key, f.diagnostic)).collect(),
            clamped_proposals: dataset.clamped_proposals,
        },
        full,
        per_benchmark,
        discrepancies,
        selections: summaries,
        warnings,
    })
}

/// Pairs whose outcome differs across benchmark families.
pub fn find_discrepancies(full: &SuiteSummary, per_benchmark: &[SuiteSummary], selections: &[SelectionSummary]) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for (i, pair) in full.pairs.iter().enumerate() {
        let mut sig = Vec::new();
        let mut not = Vec::new();
        for b in per_benchmark {
            match b.pairs.get(i).map(|c| c.bit) {
                Some(0) => sig.push(b.label.clone()),
                Some(_) => not.push(b.label.clone()),
                None => {}
            }
        }
        if sig.is_empty() || not.is_empty() {
            continue;
        }
        let selections = selections
            .iter()
            .filter_map(|s| {
                let c = s.counts.as_ref()?.get(i)?;
                Some((s.label.clone(), format!("{}/{}", c.no_significance, c.repetitions)))
            })
            .collect();
        out.push(Discrepancy {
            first: pair.first.clone(),
            second: pair.second.clone(),
            significant_in: sig,
            not_significant_in: not,
            selections,
        });
    }
    out
}

fn pair_header(pairs: &[PairCell]) -> String {
    pairs.iter().map(|p| format!(" {} vs {} |", p.first, p.second)).collect()
}

impl Report {
    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        let c = &self.config;
        let _ = writeln!(md, "# Benchmark selection report\n");
        let _ = writeln!(
            md,
            "Seed {}, alpha {}, thresholds {}, scaling {:?}.\n",
            c.seed,
            c.alpha,
            c.thresholds.iter().map(|t| threshold_tag(*t)).collect::<Vec<_>>().join(", "),
            c.scaling
        );
        let d = &self.dataset;
        let _ = writeln!(
            md,
            "{} instances, {} features, algorithms: {}.\n",
            d.instances,
            d.features,
            d.algorithms.join(", ")
        );

        let _ = writeln!(md, "## Comparisons on fixed instance sets\n");
        let _ = writeln!(md, "Cells are `p/bit`; bit 1 means no significant difference.\n");
        let _ = writeln!(md, "| Set | N | Friedman p |{}", pair_header(&self.full.pairs));
        let _ = writeln!(md, "|---|---|---|{}", "---|".repeat(self.full.pairs.len()));
        for s in self.per_benchmark.iter().chain(std::iter::once(&self.full)) {
            let cells: String = s.pairs.iter().map(|p| format!(" {} |", p.cell())).collect();
            let _ = writeln!(md, "| {} | {} | {:.4} |{}", s.label, s.size, s.friedman_p, cells);
        }
        md.push('\n');

        if !self.discrepancies.is_empty() {
            let _ = writeln!(md, "## Discrepancies\n");
            for x in &self.discrepancies {
                let _ = writeln!(
                    md,
                    "- ({}, {}): significant on {}; not significant on {}.",
                    x.first,
                    x.second,
                    x.significant_in.join(", "),
                    x.not_significant_in.join(", ")
                );
                for (label, count) in &x.selections {
                    let _ = writeln!(md, "  - {label}: no significance in {count} suites");
                }
            }
            md.push('\n');
        }

        let counted: Vec<&SelectionSummary> = self.selections.iter().filter(|s| s.counts.is_some()).collect();
        if !counted.is_empty() {
            let _ = writeln!(md, "## Robustness counts\n");
            let _ = writeln!(md, "Suites (out of the repetitions) with no significant difference per pair.\n");
            let _ = writeln!(md, "| Selection | Size (min/mean/max) |{}", pair_header(&self.full.pairs));
            let _ = writeln!(md, "|---|---|{}", "---|".repeat(self.full.pairs.len()));
            for s in counted {
                let counts = s.counts.as_ref().expect("filtered");
                let cells: String = counts
                    .iter()
                    .map(|c| format!(" {}/{} |", c.no_significance, c.repetitions))
                    .collect();
                let _ = writeln!(
                    md,
                    "| {} | {}/{:.2}/{} |{}",
                    s.label, s.sizes.min, s.sizes.mean, s.sizes.max, cells
                );
            }
            md.push('\n');
        }

        let singles: Vec<&SuiteSummary> = self.selections.iter().filter_map(|s| s.single.as_ref()).collect();
        if !singles.is_empty() {
            let _ = writeln!(md, "## Single selected suites\n");
            let _ = writeln!(md, "| Selection | N | Friedman p |{}", pair_header(&self.full.pairs));
            let _ = writeln!(md, "|---|---|---|{}", "---|".repeat(self.full.pairs.len()));
            for s in singles {
                let cells: String = s.pairs.iter().map(|p| format!(" {} |", p.cell())).collect();
                let _ = writeln!(md, "| {} | {} | {:.4} |{}", s.label, s.size, s.friedman_p, cells);
            }
            md.push('\n');
        }

        if !self.warnings.is_empty() {
            let _ = writeln!(md, "## Warnings\n");
            for w in &self.warnings {
                let _ = writeln!(md, "- {w}");
            }
        }
        md
    }
}
