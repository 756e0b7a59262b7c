//! Per-instance DSC ranking from whole run distributions.

use super::ks::ks_two_sample;
use crate::error::{Error, Result};

/// Fractional ranks of `values` (ascending, 1-based); exact ties share the
/// average of the positions they span.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = span_rank(start, end - start);
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Average of the 1-based positions `start+1 ..= start+len`.
fn span_rank(start: usize, len: usize) -> f64 {
    (start + 1) as f64 + (len - 1) as f64 / 2.0
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Groups of mutually indistinguishable algorithms, or `None` when the
/// relation is not transitive.
fn cliques(related: &[Vec<bool>]) -> Option<Vec<Vec<usize>>> {
    let m = related.len();
    let mut component = vec![usize::MAX; m];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..m {
        if component[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        component[start] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let u = members[cursor];
            cursor += 1;
            for v in 0..m {
                if v != u && related[u][v] && component[v] == usize::MAX {
                    component[v] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    let transitive = groups
        .iter()
        .all(|g| g.iter().all(|&u| g.iter().all(|&v| u == v || related[u][v])));
    transitive.then_some(groups)
}

/// DSC rank row for one problem instance. `runs[i]` holds algorithm `i`'s
/// run values (lower is better).
///
/// Pairs are compared with the two-sample KS test under a Bonferroni
/// correction over all `m(m-1)/2` pairs. When the "not significantly
/// different" relation splits the algorithms into cliques, the cliques are
/// ordered by the mean of their members' run means and each clique receives the
/// average of the positions it spans. Otherwise the row falls back to
/// fractional ranks of the per-algorithm means.
pub fn dsc_rank_instance(runs: &[&[f64]], alpha: f64) -> Result<Vec<f64>> {
    let m = runs.len();
    if m < 2 {
        return Err(Error::Domain(format!("DSC ranking needs at least 2 algorithms, got {m}")));
    }
    if let Some(i) = runs.iter().position(|r| r.len() < 2) {
        return Err(Error::Domain(format!(
            "algorithm {i} has {} runs; DSC needs at least 2",
            runs[i].len()
        )));
    }
    let pairs = (m * (m - 1) / 2) as f64;
    let mut related = vec![vec![false; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let p = ks_two_sample(runs[i], runs[j])?.p_value;
            let corrected = (p * pairs).min(1.0);
            let same = corrected >= alpha;
            related[i][j] = same;
            related[j][i] = same;
        }
    }
    let means: Vec<f64> = runs.iter().map(|r| mean(r)).collect();
    let Some(mut groups) = cliques(&related) else {
        return Ok(fractional_ranks(&means));
    };
    let group_mean = |g: &Vec<usize>| g.iter().map(|&i| means[i]).sum::<f64>() / g.len() as f64;
    groups.sort_by(|a, b| group_mean(a).total_cmp(&group_mean(b)).then(a[0].cmp(&b[0])));
    let mut ranks = vec![0.0; m];
    let mut position = 0;
    for g in &groups {
        let rank = span_rank(position, g.len());
        for &i in g {
            ranks[i] = rank;
        }
        position += g.len();
    }
    Ok(ranks)
}
