use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::design::{improved_lhs_with, Bounds, Design, LHS_CANDIDATES};
use super::dispersion::{dispersion_features, DISPERSION_QUANTILES};
use super::ic::ic_features;
use super::metamodel::metamodel_features;
use super::nbc::nbc_features;
use super::pca::pca_features;
use super::ydist::ydist_features;
use super::NamedFeatures;
use crate::datamodel::{median_aggregate, FeatureTable, InstanceKey};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// A box-constrained problem instance that can be sampled.
pub trait Objective: Sync {
    fn key(&self) -> &InstanceKey;
    fn bounds(&self) -> &Bounds;
    fn evaluate(&self, x: &[f64]) -> f64;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractConfig {
    /// Design size per repetition is `sample_factor * d`.
    pub sample_factor: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub drop_columns: Vec<String>,
    pub lhs_candidates: usize,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            sample_factor: 50,
            repetitions: 30,
            seed: 0,
            drop_columns: vec!["ic.eps.s".into()],
            lhs_candidates: LHS_CANDIDATES,
        }
    }
}

/// Instance whose row was dropped, with the first feature error hit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionFailure {
    pub key: InstanceKey,
    pub repetition: usize,
    pub diagnostic: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub table: FeatureTable,
    pub failures: Vec<ExtractionFailure>,
}

/// Every feature group on one evaluated design. `seed` drives the tour start
/// of the information-content walk.
pub fn design_features(design: &Design, seed: u64) -> Result<NamedFeatures> {
    let mut out = dispersion_features(design, &DISPERSION_QUANTILES)?;
    out.extend(ydist_features(&design.values)?.named()?);
    out.extend(metamodel_features(design)?);
    out.extend(pca_features(design)?);
    out.extend(nbc_features(design)?);
    out.extend(ic_features(design, seed)?);
    Ok(out)
}

/// Sample and compute features once for `objective`.
pub fn extract_once(
    objective: &dyn Objective,
    sample_factor: usize,
    lhs_candidates: usize,
    seed: u64,
) -> Result<NamedFeatures> {
    let bounds = objective.bounds().clone();
    let n = sample_factor * bounds.dimension();
    let points = improved_lhs_with(n, &bounds, derive_seed(seed, &[0]), lhs_candidates)?;
    let design = Design::evaluate(points, bounds, |x| objective.evaluate(x))?;
    design_features(&design, derive_seed(seed, &[1]))
}

/// Repeated extraction with cell-wise median aggregation.
///
/// Repetition `r` of instance `i` is seeded from `(seed, i, r)`, so the
/// result does not depend on scheduling. An instance with any failing
/// repetition is left out of the table and reported in `failures`.
pub fn extract_features(objectives: &[&dyn Objective], config: &ExtractConfig) -> Result<Extraction> {
    if config.repetitions == 0 {
        return Err(Error::Config("feature extraction needs at least one repetition".into()));
    }
    if config.sample_factor == 0 {
        return Err(Error::Config("sample factor must be positive".into()));
    }
    let reps = config.repetitions;
    let results: Vec<Result<NamedFeatures>> = (0..objectives.len() * reps)
        .into_par_iter()
        .map(|t| {
            let (i, r) = (t / reps, t % reps);
            let seed = derive_seed(config.seed, &[i as u64, r as u64]);
            extract_once(objectives[i], config.sample_factor, config.lhs_candidates, seed)
        })
        .collect();

    let mut failures = Vec::new();
    let mut keys = Vec::new();
    let mut per_rep: Vec<Vec<Vec<f64>>> = vec![Vec::new(); reps];
    let mut names: Option<Vec<String>> = None;
    for (i, chunk) in results.chunks(reps).enumerate() {
        let key = objectives[i].key().clone();
        if let Some((r, e)) = chunk
            .iter()
            .enumerate()
            .find_map(|(r, res)| res.as_ref().err().map(|e| (r, e)))
        {
            log::warn!("dropping {key}: repetition {r}: {e}");
            failures.push(ExtractionFailure {
                key,
                repetition: r,
                diagnostic: e.to_string(),
            });
            continue;
        }
        for (r, res) in chunk.iter().enumerate() {
            let feats = res.as_ref().expect("checked above");
            if names.is_none() {
                names = Some(feats.iter().map(|(n, _)| n.clone()).collect());
            }
            per_rep[r].push(feats.iter().map(|(_, v)| *v).collect());
        }
        keys.push(key);
    }
    let names = names.unwrap_or_else(feature_names_all);
    let tables = per_rep
        .into_iter()
        .map(|rows| FeatureTable::new(keys.clone(), names.clone(), rows))
        .collect::<Result<Vec<_>>>()?;
    let table = median_aggregate(&tables)?.drop_columns(&config.drop_columns)?;
    Ok(Extraction { table, failures })
}

/// Column names produced by [`design_features`], in output order.
pub fn feature_names_all() -> Vec<String> {
    let mut names = Vec::new();
    for stat in ["ratio_mean", "ratio_median", "diff_mean", "diff_median"] {
        for q in ["02", "05", "10", "25"] {
            names.push(format!("disp.{stat}_{q}"));
        }
    }
    for n in [
        "ela_distr.skewness",
        "ela_distr.kurtosis",
        "ela_distr.number_of_peaks",
        "ela_meta.lin_simple.adj_r2",
        "ela_meta.lin_simple.intercept",
        "ela_meta.lin_simple.coef.min",
        "ela_meta.lin_simple.coef.max",
        "ela_meta.lin_simple.coef.max_by_min",
        "ela_meta.lin_w_interact.adj_r2",
        "ela_meta.quad_simple.adj_r2",
        "ela_meta.quad_simple.cond",
        "ela_meta.quad_w_interact.adj_r2",
        "ela_pca.expl_var.cov_x",
        "ela_pca.expl_var.cor_x",
        "ela_pca.expl_var.cov_init",
        "ela_pca.expl_var.cor_init",
        "ela_pca.expl_var_PC1.cov_x",
        "ela_pca.expl_var_PC1.cor_x",
        "ela_pca.expl_var_PC1.cov_init",
        "ela_pca.expl_var_PC1.cor_init",
        "nbc.nn_nb.sd_ratio",
        "nbc.nn_nb.mean_ratio",
        "nbc.nn_nb.cor",
        "nbc.dist_ratio.coeff_var",
        "nbc.nb_fitness.cor",
        "ic.h.max",
        "ic.eps.s",
        "ic.eps.max",
        "ic.eps.ratio",
        "ic.m0",
    ] {
        names.push(n.to_string());
    }
    names
}
