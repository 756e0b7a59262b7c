//! Hierarchical-clustering-based suite selection.
//!
//! Instances are clustered bottom-up under cosine distance; the number of
//! clusters is chosen by silhouette score subject to a minimum suite size, the
//! dominant cluster can be re-clustered, and suites are formed from the members
//! nearest each cluster centroid.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datamodel::{FeatureTable, InstanceKey};
use crate::error::{Error, Result};
use crate::rng::{derived_stream, pick_index};
use crate::similarity::{cosine_similarity, similarity_matrix};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    #[default]
    Average,
    Complete,
    Single,
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(Linkage::Average),
            "complete" => Ok(Linkage::Complete),
            "single" => Ok(Linkage::Single),
            other => Err(Error::Config(format!("unknown linkage `{other}`"))),
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Average => "average",
            Linkage::Complete => "complete",
            Linkage::Single => "single",
        })
    }
}

/// How a cluster's centre is summarised.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentroidKind {
    #[default]
    Mean,
    Median,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterOptions {
    pub linkage: Linkage,
    pub centroid: CentroidKind,
}

/// One agglomeration step: slot `absorbed` is merged into slot `kept`
/// (`kept < absorbed`, slots are initial row indices).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub kept: usize,
    pub absorbed: usize,
    pub distance: f64,
    pub size: usize,
}

/// Full merge history over a table's rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

fn cosine_distances(table: &FeatureTable) -> Result<Vec<Vec<f64>>> {
    Ok(similarity_matrix(table)?
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, s)| if i == j { 0.0 } else { 1.0 - s })
                .collect()
        })
        .collect())
}

/// Bottom-up merging under cosine distance. Ties in the minimum linkage
/// distance go to the lexicographically smallest slot pair.
pub fn linkage(table: &FeatureTable, method: Linkage) -> Result<Dendrogram> {
    let n = table.n_rows();
    let mut dist = cosine_distances(table)?;
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for i in (0..n).filter(|&i| active[i]) {
            for j in ((i + 1)..n).filter(|&j| active[j]) {
                if dist[i][j] < best.0 {
                    best = (dist[i][j], i, j);
                }
            }
        }
        let (d, a, b) = best;
        let (sa, sb) = (size[a] as f64, size[b] as f64);
        for k in (0..n).filter(|&k| active[k] && k != a && k != b) {
            let updated = match method {
                Linkage::Average => (sa * dist[a][k] + sb * dist[b][k]) / (sa + sb),
                Linkage::Complete => dist[a][k].max(dist[b][k]),
                Linkage::Single => dist[a][k].min(dist[b][k]),
            };
            dist[a][k] = updated;
            dist[k][a] = updated;
        }
        active[b] = false;
        size[a] += size[b];
        merges.push(Merge {
            kept: a,
            absorbed: b,
            distance: d,
            size: size[a],
        });
    }
    Ok(Dendrogram { n, merges })
}

impl Dendrogram {
    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Cluster labels after `n - k` merges. Ids are contiguous and ordered by
    /// each cluster's smallest row index.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 || k > self.n {
            return Err(Error::Domain(format!(
                "cannot cut {} instances into {k} clusters",
                self.n
            )));
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for m in &self.merges[..self.n - k] {
            let (ra, rb) = (find(&mut parent, m.kept), find(&mut parent, m.absorbed));
            parent[rb] = ra;
        }
        let mut label_of_root = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut labels = vec![0; self.n];
        for i in 0..self.n {
            let r = find(&mut parent, i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            labels[i] = label_of_root[r];
        }
        Ok(labels)
    }
}

/// Cluster assignments, centroids and merge history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub keys: Vec<InstanceKey>,
    /// Cluster id per row of the source table.
    pub assignments: Vec<usize>,
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub centroid_kind: CentroidKind,
    /// Merge history of the base clustering.
    pub linkage_trace: Vec<Merge>,
}

impl ClusterModel {
    fn from_labels(
        table: &FeatureTable,
        assignments: Vec<usize>,
        kind: CentroidKind,
        linkage_trace: Vec<Merge>,
    ) -> Self {
        let k = assignments.iter().max().map_or(0, |m| m + 1);
        let centroids = compute_centroids(table, &assignments, k, kind);
        Self {
            keys: table.keys().to_vec(),
            assignments,
            k,
            centroids,
            centroid_kind: kind,
            linkage_trace,
        }
    }

    /// Row indices of cluster `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == c)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignments {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn cluster_of(&self, key: &InstanceKey) -> Option<usize> {
        self.keys.iter().position(|k| k == key).map(|i| self.assignments[i])
    }

    fn check_consistent(&self, table: &FeatureTable) -> Result<()> {
        if self.keys != table.keys() {
            return Err(Error::Alignment(
                "cluster model was built from a different table".into(),
            ));
        }
        Ok(())
    }

    /// CSV export: `suite,problem_id,instance_id,dimension,cluster_id`.
    pub fn assignments_csv(&self) -> String {
        let mut out = String::from("suite,problem_id,instance_id,dimension,cluster_id\n");
        for (key, c) in self.keys.iter().zip(&self.assignments) {
            out.push_str(&format!(
                "{},{},{},{},{c}\n",
                key.suite, key.problem_id, key.instance_id, key.dimension
            ));
        }
        out
    }
}

fn compute_centroids(
    table: &FeatureTable,
    assignments: &[usize],
    k: usize,
    kind: CentroidKind,
) -> Vec<Vec<f64>> {
    let d = table.n_features();
    (0..k)
        .map(|c| {
            let members: Vec<&[f64]> = assignments
                .iter()
                .zip(table.rows())
                .filter(|(&a, _)| a == c)
                .map(|(_, r)| r.as_slice())
                .collect();
            (0..d)
                .map(|j| {
                    let mut col: Vec<f64> = members.iter().map(|r| r[j]).collect();
                    match kind {
                        CentroidKind::Mean => col.iter().sum::<f64>() / col.len() as f64,
                        CentroidKind::Median => {
                            crate::datamodel::median_in_place(&mut col)
                        }
                    }
                })
                .collect()
        })
        .collect()
}

pub fn agglomerative_cluster(table: &FeatureTable, k: usize) -> Result<ClusterModel> {
    agglomerative_cluster_with(table, k, ClusterOptions::default())
}

pub fn agglomerative_cluster_with(
    table: &FeatureTable,
    k: usize,
    options: ClusterOptions,
) -> Result<ClusterModel> {
    if k == 0 || k > table.n_rows() {
        return Err(Error::Domain(format!(
            "k = {k} clusters requested for {} instances",
            table.n_rows()
        )));
    }
    let dendrogram = linkage(table, options.linkage)?;
    let labels = dendrogram.cut(k)?;
    Ok(ClusterModel::from_labels(
        table,
        labels,
        options.centroid,
        dendrogram.merges,
    ))
}

fn silhouette_from_distances(dist: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let n = labels.len();
    let mut sizes = vec![0usize; k];
    for &c in labels {
        sizes[c] += 1;
    }
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            if sizes[own] <= 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..n {
                if j != i {
                    sums[labels[j]] += dist[i][j];
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom > 0.0 {
                (b - a) / denom
            } else {
                0.0
            }
        })
        .sum();
    total / n as f64
}

/// Mean silhouette under cosine distance; members of singleton clusters
/// contribute 0.
pub fn silhouette_score(table: &FeatureTable, model: &ClusterModel) -> Result<f64> {
    model.check_consistent(table)?;
    if model.k < 2 {
        return Err(Error::Domain("silhouette score needs at least 2 clusters".into()));
    }
    let dist = cosine_distances(table)?;
    Ok(silhouette_from_distances(&dist, &model.assignments, model.k))
}

/// Silhouette score for every `k` in `k_range`, from a single dendrogram.
pub fn silhouette_sweep(
    table: &FeatureTable,
    k_range: RangeInclusive<usize>,
    method: Linkage,
) -> Result<Vec<(usize, f64)>> {
    let n = table.n_rows();
    if k_range.is_empty() || *k_range.start() < 2 || *k_range.end() > n {
        return Err(Error::Domain(format!(
            "k range {}..={} must be non-empty within [2, {n}]",
            k_range.start(),
            k_range.end()
        )));
    }
    let dendrogram = linkage(table, method)?;
    let dist = cosine_distances(table)?;
    k_range
        .map(|k| Ok((k, silhouette_from_distances(&dist, &dendrogram.cut(k)?, k))))
        .collect()
}

/// `k` with the highest silhouette among those yielding at least `min_total`
/// clusters; ties go to the smaller `k`.
pub fn choose_k(
    table: &FeatureTable,
    k_range: RangeInclusive<usize>,
    min_total: usize,
) -> Result<usize> {
    choose_k_with(table, k_range, min_total, Linkage::default())
}

pub fn choose_k_with(
    table: &FeatureTable,
    k_range: RangeInclusive<usize>,
    min_total: usize,
    method: Linkage,
) -> Result<usize> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    let feasible_lo = lo.max(min_total);
    if feasible_lo > hi {
        return Err(Error::Constraint(format!(
            "no k in {lo}..={hi} satisfies the minimum suite size {min_total}"
        )));
    }
    if hi > table.n_rows() || lo < 2 {
        return Err(Error::Domain(format!(
            "k range {lo}..={hi} must lie within [2, {}]",
            table.n_rows()
        )));
    }
    let sweep = silhouette_sweep(table, feasible_lo..=hi, method)?;
    let mut best = sweep[0];
    for &(k, s) in &sweep[1..] {
        if s > best.1 {
            best = (k, s);
        }
    }
    Ok(best.0)
}

/// Re-clusters the largest cluster (lowest id on ties) into `sub_k` parts.
/// Other clusters keep their relative order with contiguous ids; the
/// sub-clusters are appended.
pub fn split_largest(
    table: &FeatureTable,
    model: &ClusterModel,
    sub_k: usize,
) -> Result<ClusterModel> {
    split_largest_with(table, model, sub_k, ClusterOptions {
        centroid: model.centroid_kind,
        ..Default::default()
    })
}

pub fn split_largest_with(
    table: &FeatureTable,
    model: &ClusterModel,
    sub_k: usize,
    options: ClusterOptions,
) -> Result<ClusterModel> {
    model.check_consistent(table)?;
    let sizes = model.sizes();
    let largest = (0..model.k)
        .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
        .ok_or_else(|| Error::Domain("model has no clusters".into()))?;
    if sub_k == 0 || sub_k > sizes[largest] {
        return Err(Error::Domain(format!(
            "cannot split a cluster of {} instances into {sub_k} sub-clusters",
            sizes[largest]
        )));
    }
    let members = model.members(largest);
    let sub_table = table.select_rows(&members);
    let sub_labels = linkage(&sub_table, options.linkage)?.cut(sub_k)?;
    let mut assignments = model.assignments.clone();
    for a in assignments.iter_mut() {
        if *a > largest {
            *a -= 1;
        }
    }
    for (&row, &s) in members.iter().zip(&sub_labels) {
        assignments[row] = model.k - 1 + s;
    }
    Ok(ClusterModel::from_labels(
        table,
        assignments,
        options.centroid,
        model.linkage_trace.clone(),
    ))
}

/// Members of cluster `c` ordered by cosine similarity to its centroid,
/// descending; ties keep the smaller row index first.
fn ranked_members(table: &FeatureTable, model: &ClusterModel, c: usize) -> Result<Vec<usize>> {
    let centroid = &model.centroids[c];
    let mut scored = model
        .members(c)
        .into_iter()
        .map(|i| {
            cosine_similarity(table.row(i), centroid)
                .map(|s| (i, s))
                .map_err(|_| {
                    Error::Domain(format!(
                        "cluster {c}: zero-norm centroid or member {}",
                        table.keys()[i]
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(scored.into_iter().map(|(i, _)| i).collect())
}

/// Row index of the member nearest each centroid, one per cluster.
pub fn centroid_representative_rows(table: &FeatureTable, model: &ClusterModel) -> Result<Vec<usize>> {
    model.check_consistent(table)?;
    (0..model.k)
        .map(|c| Ok(ranked_members(table, model, c)?[0]))
        .collect()
}

pub fn centroid_representatives(
    table: &FeatureTable,
    model: &ClusterModel,
) -> Result<Vec<InstanceKey>> {
    Ok(centroid_representative_rows(table, model)?
        .into_iter()
        .map(|i| table.keys()[i].clone())
        .collect())
}

/// Pool size for a cluster; a small slack keeps `0.1 * 30` from rounding up
/// to 4.
fn pool_size(fraction: f64, size: usize) -> usize {
    ((fraction * size as f64 - 1e-9).ceil() as usize).clamp(1, size)
}

/// Per cluster, the `ceil(fraction * size)` members nearest the centroid.
pub fn representative_pools(
    table: &FeatureTable,
    model: &ClusterModel,
    fraction: f64,
) -> Result<Vec<Vec<InstanceKey>>> {
    model.check_consistent(table)?;
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Domain(format!("pool fraction {fraction} outside (0, 1]")));
    }
    (0..model.k)
        .map(|c| {
            let ranked = ranked_members(table, model, c)?;
            let take = pool_size(fraction, ranked.len());
            Ok(ranked[..take].iter().map(|&i| table.keys()[i].clone()).collect())
        })
        .collect()
}

/// `repetitions` suites, each drawing one member uniformly from every pool.
/// Repetition `r` uses its own stream derived from `(seed, r)`.
pub fn sample_suite(
    pools: &[Vec<InstanceKey>],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<Vec<InstanceKey>>> {
    if repetitions == 0 {
        return Err(Error::Domain("sample_suite needs at least one repetition".into()));
    }
    if let Some(c) = pools.iter().position(Vec::is_empty) {
        return Err(Error::Domain(format!("pool of cluster {c} is empty")));
    }
    Ok((0..repetitions as u64)
        .map(|r| {
            let mut rng = derived_stream(seed, &[r]);
            pools
                .iter()
                .map(|pool| pool[pick_index(&mut rng, pool.len())].clone())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: Vec<Vec<f64>>) -> FeatureTable {
        let d = rows[0].len();
        FeatureTable::new(
            (1..=rows.len() as u32)
                .map(|i| InstanceKey::new("T", i, 1, 3).unwrap())
                .collect(),
            (0..d).map(|j| format!("f{j}")).collect(),
            rows,
        )
        .unwrap()
    }

    /// Two bundles of 5 vectors around the x- and y-axes.
    fn two_bundles() -> FeatureTable {
        let mut rows = Vec::new();
        for i in 0..5 {
            rows.push(vec![1.0, 0.01 * i as f64, 0.02]);
        }
        for i in 0..5 {
            rows.push(vec![0.02, 1.0, 0.01 * i as f64]);
        }
        table(rows)
    }

    #[test]
    fn k_equals_n_and_one() {
        let t = two_bundles();
        let m = agglomerative_cluster(&t, 10).unwrap();
        assert_eq!(m.assignments, (0..10).collect::<Vec<_>>());
        let m = agglomerative_cluster(&t, 1).unwrap();
        assert!(m.assignments.iter().all(|&a| a == 0));
        assert!(agglomerative_cluster(&t, 11).is_err());
    }

    #[test]
    fn bundles_recovered() {
        let t = two_bundles();
        let m = agglomerative_cluster(&t, 2).unwrap();
        assert_eq!(m.assignments, [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        let s2 = silhouette_score(&t, &m).unwrap();
        assert!(s2 > 0.9, "{s2}");
        let s3 = silhouette_score(&t, &agglomerative_cluster(&t, 3).unwrap()).unwrap();
        assert!(s3 < s2);
    }

    #[test]
    fn silhouette_needs_two_clusters() {
        let t = two_bundles();
        let m = agglomerative_cluster(&t, 1).unwrap();
        assert!(silhouette_score(&t, &m).is_err());
        let m = agglomerative_cluster(&t, 10).unwrap();
        assert_eq!(silhouette_score(&t, &m).unwrap(), 0.0);
    }

    #[test]
    fn choose_k_examples() {
        let t = two_bundles();
        assert_eq!(choose_k(&t, 2..=2, 0).unwrap(), 2);
        assert_eq!(choose_k(&t, 2..=6, 2).unwrap(), 2);
        assert!(matches!(choose_k(&t, 2..=6, 7), Err(Error::Constraint(_))));
    }

    #[test]
    fn split_renumbers_and_appends() {
        let mut rows = Vec::new();
        for i in 0..6 {
            rows.push(vec![1.0, 0.05 * i as f64, 0.0]);
        }
        rows.push(vec![0.0, 1.0, 0.0]);
        rows.push(vec![0.0, 0.0, 1.0]);
        let t = table(rows);
        let m = agglomerative_cluster(&t, 3).unwrap();
        assert_eq!(m.sizes(), [6, 1, 1]);
        let s = split_largest(&t, &m, 3).unwrap();
        assert_eq!(s.k, 5);
        assert_eq!(s.assignments[6], 0);
        assert_eq!(s.assignments[7], 1);
        assert!(s.assignments[..6].iter().all(|&a| a >= 2));
        let same = split_largest(&t, &m, 1).unwrap();
        assert_eq!(same.sizes(), [1, 1, 6]);
        assert!(split_largest(&t, &m, 7).is_err());
    }

    #[test]
    fn representative_is_mean_direction() {
        let t = table(vec![vec![1.0, 0.0, 0.0], vec![0.5, 0.5, 0.0], vec![0.0, 1.0, 0.0]]);
        let m = agglomerative_cluster(&t, 1).unwrap();
        assert_eq!(centroid_representative_rows(&t, &m).unwrap(), [1]);
    }

    #[test]
    fn pools_sizes() {
        assert_eq!(pool_size(0.1, 30), 3);
        assert_eq!(pool_size(0.25, 8), 2);
        assert_eq!(pool_size(0.01, 1), 1);
        assert_eq!(pool_size(1.0, 7), 7);
        let t = two_bundles();
        let m = agglomerative_cluster(&t, 2).unwrap();
        assert!(representative_pools(&t, &m, 0.0).is_err());
        let full = representative_pools(&t, &m, 1.0).unwrap();
        assert_eq!(full.iter().map(Vec::len).collect::<Vec<_>>(), [5, 5]);
    }

    #[test]
    fn singleton_pools_repeat() {
        let pools = vec![vec![InstanceKey::new("A", 1, 1, 1).unwrap()]; 4];
        let suites = sample_suite(&pools, 5, 3).unwrap();
        assert_eq!(suites.len(), 5);
        assert!(suites.iter().all(|s| s == &suites[0]));
        assert!(sample_suite(&pools, 0, 3).is_err());
    }

    #[test]
    fn assignment_csv_format() {
        let t = two_bundles();
        let m = agglomerative_cluster(&t, 2).unwrap();
        let csv = m.assignments_csv();
        assert!(csv.starts_with("suite,problem_id,instance_id,dimension,cluster_id\nT,1,1,3,0\n"));
    }
}
