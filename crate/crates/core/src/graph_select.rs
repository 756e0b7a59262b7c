//! Benchmark suites as dominating sets and maximal independent sets of the
//! similarity graph.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datamodel::InstanceKey;
use crate::error::{Error, Result};
use crate::rng::{pick_index, shuffle, stream};
use crate::similarity::SimilarityGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heuristic {
    #[serde(rename = "ds")]
    DominatingSet,
    #[serde(rename = "mis")]
    MaximalIndependentSet,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::DominatingSet => "ds",
            Heuristic::MaximalIndependentSet => "mis",
        })
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ds" => Ok(Heuristic::DominatingSet),
            "mis" => Ok(Heuristic::MaximalIndependentSet),
            other => Err(Error::Config(format!("unknown graph heuristic `{other}`"))),
        }
    }
}

/// One seeded selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRun {
    pub heuristic: Heuristic,
    pub threshold: f64,
    pub seed: u64,
    /// Selected node indices, ascending.
    pub nodes: Vec<usize>,
    pub selected: Vec<InstanceKey>,
}

impl SelectionRun {
    fn new(graph: &SimilarityGraph, heuristic: Heuristic, seed: u64, mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        Self {
            heuristic,
            threshold: graph.threshold(),
            seed,
            selected: nodes.iter().map(|&i| graph.nodes()[i].clone()).collect(),
            nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn ensure_nonempty(graph: &SimilarityGraph) -> Result<()> {
    if graph.n_nodes() == 0 {
        return Err(Error::Domain("selection on an empty graph".into()));
    }
    Ok(())
}

/// Greedy max-coverage dominating set.
///
/// Each step adds a node whose closed neighbourhood covers the most
/// not-yet-dominated nodes; ties are broken uniformly at random.
pub fn dominating_set(graph: &SimilarityGraph, seed: u64) -> Result<SelectionRun> {
    ensure_nonempty(graph)?;
    let n = graph.n_nodes();
    let mut rng = stream(seed);
    let mut dominated = vec![false; n];
    let mut in_set = vec![false; n];
    // gain[u] = undominated nodes in the closed neighbourhood of u
    let mut gain: Vec<usize> = (0..n).map(|u| graph.degree(u) + 1).collect();
    let mut remaining = n;
    let mut chosen = Vec::new();
    let mut best = Vec::with_capacity(n);
    while remaining > 0 {
        let top = (0..n).filter(|&u| !in_set[u]).map(|u| gain[u]).max().unwrap_or(0);
        best.clear();
        best.extend((0..n).filter(|&u| !in_set[u] && gain[u] == top));
        let u = best[pick_index(&mut rng, best.len())];
        in_set[u] = true;
        chosen.push(u);
        for v in std::iter::once(u).chain(graph.neighbors(u).iter().copied()) {
            if !dominated[v] {
                dominated[v] = true;
                remaining -= 1;
                for w in std::iter::once(v).chain(graph.neighbors(v).iter().copied()) {
                    gain[w] -= 1;
                }
            }
        }
    }
    let run = SelectionRun::new(graph, Heuristic::DominatingSet, seed, chosen);
    assert!(verify_dominating(graph, &run.nodes), "greedy output is not dominating");
    Ok(run)
}

/// Random-permutation greedy maximal independent set.
pub fn maximal_independent_set(graph: &SimilarityGraph, seed: u64) -> Result<SelectionRun> {
    ensure_nonempty(graph)?;
    let n = graph.n_nodes();
    let mut rng = stream(seed);
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut rng, &mut order);
    let mut blocked = vec![false; n];
    let mut chosen = Vec::new();
    for u in order {
        if blocked[u] {
            continue;
        }
        chosen.push(u);
        blocked[u] = true;
        for &v in graph.neighbors(u) {
            blocked[v] = true;
        }
    }
    let run = SelectionRun::new(graph, Heuristic::MaximalIndependentSet, seed, chosen);
    assert!(
        verify_independent_maximal(graph, &run.nodes),
        "greedy output is not a maximal independent set"
    );
    Ok(run)
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut member = vec![false; n];
    for &u in set {
        member[u] = true;
    }
    member
}

/// Every node is in `set` or adjacent to a member.
pub fn verify_dominating(graph: &SimilarityGraph, set: &[usize]) -> bool {
    let member = membership(graph.n_nodes(), set);
    (0..graph.n_nodes()).all(|u| member[u] || graph.neighbors(u).iter().any(|&v| member[v]))
}

/// No edge inside `set`, and every outside node has a neighbour inside.
pub fn verify_independent_maximal(graph: &SimilarityGraph, set: &[usize]) -> bool {
    let member = membership(graph.n_nodes(), set);
    let independent = set
        .iter()
        .all(|&u| graph.neighbors(u).iter().all(|&v| !member[v]));
    independent && verify_dominating(graph, set)
}

pub fn select(graph: &SimilarityGraph, heuristic: Heuristic, seed: u64) -> Result<SelectionRun> {
    match heuristic {
        Heuristic::DominatingSet => dominating_set(graph, seed),
        Heuristic::MaximalIndependentSet => maximal_independent_set(graph, seed),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeStatistics {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub heuristic: Heuristic,
    pub threshold: f64,
    pub runs: Vec<SelectionRun>,
    pub sizes: SizeStatistics,
}

/// One independent run per seed.
pub fn run_batch(graph: &SimilarityGraph, heuristic: Heuristic, seeds: &[u64]) -> Result<BatchResult> {
    if seeds.is_empty() {
        return Err(Error::Domain("run_batch needs at least one seed".into()));
    }
    let runs = seeds
        .par_iter()
        .map(|&s| select(graph, heuristic, s))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = runs.iter().map(SelectionRun::len).collect();
    Ok(BatchResult {
        heuristic,
        threshold: graph.threshold(),
        sizes: SizeStatistics {
            min: *sizes.iter().min().expect("non-empty"),
            max: *sizes.iter().max().expect("non-empty"),
            mean: sizes.iter().sum::<usize>() as f64 / sizes.len() as f64,
        },
        runs,
    })
}
