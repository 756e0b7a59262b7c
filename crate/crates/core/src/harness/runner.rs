use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::optimizers::{run_optimizer, Budgeted, OptimizerSpec};
use super::problems::ProblemSpec;
use crate::datamodel::{InstanceKey, PerfRecord, PerformanceTable};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Evaluations per dimension when `budget` is unset.
    pub budget_per_dimension: usize,
    /// Absolute budget overriding `budget_per_dimension`.
    pub budget: Option<usize>,
    pub runs: usize,
    pub eps: f64,
    pub master_seed: u64,
    /// Keep (evaluation, best precision) traces in the records.
    pub trace: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            budget_per_dimension: 2000,
            budget: None,
            runs: 30,
            eps: 1e-8,
            master_seed: 0,
            trace: false,
        }
    }
}

impl ExperimentConfig {
    pub fn budget_for(&self, dimension: usize, factor: f64) -> usize {
        let base = self.budget.unwrap_or(self.budget_per_dimension * dimension);
        ((base as f64 * factor).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: InstanceKey,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub best_precision: f64,
    pub evaluations_used: usize,
    pub budget: usize,
    /// Proposals that had to be clamped into the box.
    pub clamped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub records: Vec<RunRecord>,
    pub table: PerformanceTable,
}

impl Experiment {
    pub fn total_clamped(&self) -> usize {
        self.records.iter().map(|r| r.clamped).sum()
    }
}

/// One fixed-budget run. Stops early once the precision reaches `eps`.
pub fn run_single(
    problem: &ProblemSpec,
    optimizer: &OptimizerSpec,
    config: &ExperimentConfig,
    run: usize,
    seed: u64,
) -> RunRecord {
    let budget = config.budget_for(problem.dimension(), optimizer.budget_factor);
    let mut ev = Budgeted::new(problem, budget, config.eps, config.trace);
    run_optimizer(optimizer.kind, &mut ev, seed);
    debug_assert!(ev
        .trace
        .as_ref()
        .is_none_or(|t| t.windows(2).all(|w| w[1].1 <= w[0].1)));
    RunRecord {
        problem: problem.key.clone(),
        algorithm: optimizer.name.clone(),
        run,
        seed,
        best_precision: ev.best,
        evaluations_used: ev.used,
        budget,
        clamped: ev.clamped,
        trace: ev.trace,
    }
}

/// Every optimizer on every problem, `config.runs` times. The seed of run
/// `r` of optimizer `o` on problem `p` is derived from
/// `(master_seed, p, o, r)`; records come back in that nested order.
pub fn run_experiment(
    problems: &[ProblemSpec],
    optimizers: &[OptimizerSpec],
    config: &ExperimentConfig,
) -> Result<Experiment> {
    if config.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    if config.budget == Some(0) || (config.budget.is_none() && config.budget_per_dimension == 0) {
        return Err(Error::Config("budget must be at least 1".into()));
    }
    let mut names: Vec<&str> = optimizers.iter().map(|o| o.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() != optimizers.len() {
        return Err(Error::Config("optimizer names must be unique".into()));
    }
    if let Some(o) = optimizers.iter().find(|o| !(o.budget_factor > 0.0)) {
        return Err(Error::Config(format!("budget factor of {} must be positive", o.name)));
    }
    let (np, no, nr) = (problems.len(), optimizers.len(), config.runs);
    let records: Vec<RunRecord> = (0..np * no * nr)
        .into_par_iter()
        .map(|t| {
            let (p, o, r) = (t / (no * nr), (t / nr) % no, t % nr);
            let seed = derive_seed(config.master_seed, &[p as u64, o as u64, r as u64]);
            run_single(&problems[p], &optimizers[o], config, r, seed)
        })
        .collect();
    let table = PerformanceTable::new(
        records
            .iter()
            .map(|r| PerfRecord {
                key: r.problem.clone(),
                algorithm: r.algorithm.clone(),
                run_index: r.run,
                value: r.best_precision,
            })
            .collect(),
    )?;
    Ok(Experiment { records, table })
}
