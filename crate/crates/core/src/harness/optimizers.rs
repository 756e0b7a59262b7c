use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::problems::ProblemSpec;
use crate::error::{Error, Result};
use crate::rng::{normal, pick_index, stream, unit, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    RandomSearch,
    /// (1+1)-ES with the one-fifth success rule.
    OnePlusOneEs,
    /// DE/rand/1/bin.
    DifferentialEvolution,
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizerKind::RandomSearch => "random_search",
            OptimizerKind::OnePlusOneEs => "one_plus_one_es",
            OptimizerKind::DifferentialEvolution => "differential_evolution",
        })
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_search" | "rs" => Ok(OptimizerKind::RandomSearch),
            "one_plus_one_es" | "es" => Ok(OptimizerKind::OnePlusOneEs),
            "differential_evolution" | "de" => Ok(OptimizerKind::DifferentialEvolution),
            other => Err(Error::Config(format!("unknown optimizer `{other}`"))),
        }
    }
}

/// An optimizer entry of the portfolio. `budget_factor` scales the shared
/// evaluation budget (below 1 handicaps the optimizer).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSpec {
    pub name: String,
    pub kind: OptimizerKind,
    #[serde(default = "one")]
    pub budget_factor: f64,
}

fn one() -> f64 {
    1.0
}

impl OptimizerSpec {
    pub fn new(name: impl Into<String>, kind: OptimizerKind) -> Self {
        Self {
            name: name.into(),
            kind,
            budget_factor: 1.0,
        }
    }

    pub fn with_budget_factor(mut self, f: f64) -> Self {
        self.budget_factor = f;
        self
    }
}

/// The default portfolio: one optimizer of each kind.
pub fn default_portfolio() -> Vec<OptimizerSpec> {
    vec![
        OptimizerSpec::new("RS", OptimizerKind::RandomSearch),
        OptimizerSpec::new("ES", OptimizerKind::OnePlusOneEs),
        OptimizerSpec::new("DE", OptimizerKind::DifferentialEvolution),
    ]
}

/// Budget bookkeeping around a problem: clamps proposals, counts
/// evaluations and tracks the best precision.
pub(crate) struct Budgeted<'a> {
    problem: &'a ProblemSpec,
    budget: usize,
    eps: f64,
    pub(crate) used: usize,
    pub(crate) best: f64,
    pub(crate) clamped: usize,
    pub(crate) trace: Option<Vec<(usize, f64)>>,
}

impl<'a> Budgeted<'a> {
    pub(crate) fn new(problem: &'a ProblemSpec, budget: usize, eps: f64, trace: bool) -> Self {
        Self {
            problem,
            budget,
            eps,
            used: 0,
            best: f64::INFINITY,
            clamped: 0,
            trace: trace.then(Vec::new),
        }
    }

    pub(crate) fn done(&self) -> bool {
        self.used >= self.budget || self.best <= self.eps
    }

    fn eval(&mut self, x: &mut [f64]) -> f64 {
        debug_assert!(!self.done());
        if self.problem.bounds.clamp(x) {
            self.clamped += 1;
        }
        let f = self.problem.value(x);
        self.used += 1;
        let precision = (f - self.problem.optimum_value).max(0.0);
        if precision < self.best {
            self.best = precision;
        }
        if let Some(t) = self.trace.as_mut() {
            t.push((self.used, self.best));
        }
        f
    }
}

fn uniform_point(rng: &mut StreamRng, p: &ProblemSpec) -> Vec<f64> {
    let (lo, hi) = (p.bounds.lower(), p.bounds.upper());
    (0..p.dimension()).map(|j| lo[j] + unit(rng) * (hi[j] - lo[j])).collect()
}

fn random_search(ev: &mut Budgeted, rng: &mut StreamRng) {
    while !ev.done() {
        let mut x = uniform_point(rng, ev.problem);
        ev.eval(&mut x);
    }
}

fn one_plus_one_es(ev: &mut Budgeted, rng: &mut StreamRng) {
    let p = ev.problem;
    let width = p.bounds.upper()[0] - p.bounds.lower()[0];
    let sigma0 = 0.2 * width;
    let up = 1.5f64;
    let down = up.powf(-0.25);
    while !ev.done() {
        let mut x = uniform_point(rng, p);
        let mut fx = ev.eval(&mut x);
        let mut sigma = sigma0;
        while !ev.done() && sigma > 1e-12 * width {
            let mut y: Vec<f64> = x.iter().map(|v| v + sigma * normal(rng)).collect();
            let fy = ev.eval(&mut y);
            if fy <= fx {
                x = y;
                fx = fy;
                sigma *= up;
            } else {
                sigma *= down;
            }
        }
    }
}

const DE_F: f64 = 0.5;
const DE_CR: f64 = 0.9;

fn differential_evolution(ev: &mut Budgeted, rng: &mut StreamRng) {
    let p = ev.problem;
    let d = p.dimension();
    let np = (10 * d).max(5);
    let mut pop = Vec::with_capacity(np);
    let mut fit = Vec::with_capacity(np);
    for _ in 0..np {
        if ev.done() {
            return;
        }
        let mut x = uniform_point(rng, p);
        fit.push(ev.eval(&mut x));
        pop.push(x);
    }
    loop {
        for i in 0..np {
            if ev.done() {
                return;
            }
            let mut pick = |exclude: &[usize]| loop {
                let c = pick_index(rng, np);
                if !exclude.contains(&c) {
                    break c;
                }
            };
            let a = pick(&[i]);
            let b = pick(&[i, a]);
            let c = pick(&[i, a, b]);
            let forced = pick_index(rng, d);
            let mut trial: Vec<f64> = (0..d)
                .map(|j| {
                    if j == forced || unit(rng) < DE_CR {
                        pop[a][j] + DE_F * (pop[b][j] - pop[c][j])
                    } else {
                        pop[i][j]
                    }
                })
                .collect();
            let f = ev.eval(&mut trial);
            if f <= fit[i] {
                pop[i] = trial;
                fit[i] = f;
            }
        }
    }
}

pub(crate) fn run_optimizer(kind: OptimizerKind, ev: &mut Budgeted, seed: u64) {
    let mut rng = stream(seed);
    match kind {
        OptimizerKind::RandomSearch => random_search(ev, &mut rng),
        OptimizerKind::OnePlusOneEs => one_plus_one_es(ev, &mut rng),
        OptimizerKind::DifferentialEvolution => differential_evolution(ev, &mut rng),
    }
}
