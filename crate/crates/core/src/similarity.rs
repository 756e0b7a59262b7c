//! Cosine similarity over feature rows and the thresholded similarity graph.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datamodel::{format_value, FeatureTable, InstanceKey};
use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `dot(a, b) / (|a| |b|)`, clamped to `[-1, 1]`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "cosine similarity of vectors with lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Domain("cosine similarity of a zero-norm vector".into()));
    }
    Ok(cosine_with_norms(a, na, b, nb))
}

/// Product of norms is formed symmetrically so that swapping arguments gives
/// bit-identical results.
pub(crate) fn cosine_with_norms(a: &[f64], na: f64, b: &[f64], nb: f64) -> f64 {
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

/// Feature scaling applied before similarities are computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    #[default]
    Raw,
    MinMax,
}

impl Scaling {
    pub fn apply(self, table: &FeatureTable) -> FeatureTable {
        match self {
            Scaling::Raw => table.clone(),
            Scaling::MinMax => table.min_max_scaled(),
        }
    }
}

fn row_norms(table: &FeatureTable) -> Result<Vec<f64>> {
    table
        .rows()
        .iter()
        .zip(table.keys())
        .map(|(r, k)| {
            let n = norm(r);
            if n > 0.0 {
                Ok(n)
            } else {
                Err(Error::Domain(format!("instance {k} has a zero-norm feature vector")))
            }
        })
        .collect()
}

/// Full `n × n` cosine similarity matrix (diagonal = 1).
pub fn similarity_matrix(table: &FeatureTable) -> Result<Vec<Vec<f64>>> {
    let norms = row_norms(table)?;
    let rows = table.rows();
    Ok((0..rows.len())
        .into_par_iter()
        .map(|i| {
            (0..rows.len())
                .map(|j| {
                    if i == j {
                        1.0
                    } else {
                        cosine_with_norms(&rows[i], norms[i], &rows[j], norms[j])
                    }
                })
                .collect()
        })
        .collect())
}

/// Undirected simple graph over instances; `u ~ v` iff
/// `cosine(row_u, row_v) >= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    nodes: Vec<InstanceKey>,
    threshold: f64,
    /// `(u, v, similarity)` with `u < v`, sorted.
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<usize>>,
}

impl SimilarityGraph {
    /// Graph from an explicit edge list. Self-loops and duplicate edges are
    /// rejected.
    pub fn from_edges(
        nodes: Vec<InstanceKey>,
        threshold: f64,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let n = nodes.len();
        let mut list: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, s) in edges {
            if u >= n || v >= n {
                return Err(Error::Integrity(format!("edge ({u}, {v}) outside {n} nodes")));
            }
            if u == v {
                return Err(Error::Integrity(format!("self-loop on node {u}")));
            }
            list.push((u.min(v), u.max(v), s));
        }
        list.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        if let Some(w) = list.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::Integrity(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, _) in &list {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for adj in adjacency.iter_mut() {
            adj.sort_unstable();
        }
        Ok(Self {
            nodes,
            threshold,
            edges: list,
            adjacency,
        })
    }

    /// Unweighted graph on anonymous nodes, mostly for tests and fixtures.
    pub fn from_adjacency_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let nodes = (1..=n as u32)
            .map(|i| InstanceKey::new("G", i, 1, 1))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(nodes, f64::NAN, pairs.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub fn nodes(&self) -> &[InstanceKey] {
        &self.nodes
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Writes the edge-list export: one JSON header line with the threshold
    /// and node order (plus optional metadata), then `u_key v_key similarity`
    /// per edge.
    pub fn write_edge_list<W: Write>(&self, mut w: W, metadata: Option<&serde_json::Value>) -> Result<()> {
        let header = EdgeListHeader {
            threshold: self.threshold,
            nodes: self.nodes.iter().map(InstanceKey::label).collect(),
            node_keys: self.nodes.clone(),
            n_edges: self.edges.len(),
            metadata: metadata.cloned(),
        };
        let io = |e| Error::io("<edge list>", e);
        writeln!(w, "{}", serde_json::to_string(&header)?).map_err(io)?;
        for &(u, v, s) in &self.edges {
            writeln!(w, "{} {} {}", self.nodes[u], self.nodes[v], format_value(s)).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let io = |e| Error::io("<edge list>", e);
        let first = lines
            .next()
            .ok_or_else(|| Error::Integrity("empty edge-list file".into()))?
            .map_err(io)?;
        let header: EdgeListHeader = serde_json::from_str(&first)?;
        let index: HashMap<String, usize> = header
            .nodes
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut edges = Vec::with_capacity(header.n_edges);
        for line in lines {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Integrity(format!("malformed edge line `{line}`")));
            }
            let lookup = |l: &str| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::Integrity(format!("edge references unknown node {l}")))
            };
            let s: f64 = parts[2]
                .parse()
                .map_err(|_| Error::Integrity(format!("bad similarity in `{line}`")))?;
            edges.push((lookup(parts[0])?, lookup(parts[1])?, s));
        }
        Self::from_edges(header.node_keys, header.threshold, edges)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeListHeader {
    threshold: f64,
    nodes: Vec<String>,
    node_keys: Vec<InstanceKey>,
    n_edges: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<serde_json::Value>,
}

/// Exhaustive pairwise construction; node order follows table row order.
pub fn build_graph(table: &FeatureTable, threshold: f64) -> Result<SimilarityGraph> {
    if table.is_empty() {
        return Err(Error::Domain("cannot build a graph from an empty table".into()));
    }
    let norms = row_norms(table)?;
    let rows = table.rows();
    let edges: Vec<(usize, usize, f64)> = (0..rows.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let norms = &norms;
            ((i + 1)..rows.len()).filter_map(move |j| {
                let s = cosine_with_norms(&rows[i], norms[i], &rows[j], norms[j]);
                (s >= threshold).then_some((i, j, s))
            })
        })
        .collect();
    SimilarityGraph::from_edges(table.keys().to_vec(), threshold, edges)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStatistics {
    pub degrees: Vec<usize>,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    /// `(degree, fraction of nodes with degree <= it)` at each distinct degree.
    pub ecdf: Vec<(usize, f64)>,
}

impl DegreeStatistics {
    /// Fraction of nodes whose degree lies strictly inside `(lo, hi)`.
    pub fn fraction_in_open_range(&self, lo: usize, hi: usize) -> f64 {
        if self.degrees.is_empty() {
            return 0.0;
        }
        let c = self.degrees.iter().filter(|&&d| d > lo && d < hi).count();
        c as f64 / self.degrees.len() as f64
    }

    pub fn ecdf_csv(&self) -> String {
        let mut out = String::from("degree,ecdf\n");
        for (d, f) in &self.ecdf {
            out.push_str(&format!("{d},{}\n", format_value(*f)));
        }
        out
    }
}

pub fn degree_statistics(graph: &SimilarityGraph) -> DegreeStatistics {
    let degrees: Vec<usize> = (0..graph.n_nodes()).map(|u| graph.degree(u)).collect();
    let n = degrees.len();
    let mut sorted = degrees.clone();
    sorted.sort_unstable();
    let mut ecdf = Vec::new();
    for (i, &d) in sorted.iter().enumerate() {
        if i + 1 == n || sorted[i + 1] != d {
            ecdf.push((d, (i + 1) as f64 / n as f64));
        }
    }
    DegreeStatistics {
        min: sorted.first().copied().unwrap_or(0),
        max: sorted.last().copied().unwrap_or(0),
        mean: if n == 0 { 0.0 } else { sorted.iter().sum::<usize>() as f64 / n as f64 },
        degrees,
        ecdf,
    }
}

/// Connected components as sorted node-index lists, largest first; equal
/// sizes are ordered by their smallest member.
pub fn connected_components(graph: &SimilarityGraph) -> Vec<Vec<usize>> {
    let n = graph.n_nodes();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    components
}
