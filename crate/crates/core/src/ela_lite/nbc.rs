use super::design::{dist, Design};
use super::NamedFeatures;
use crate::error::{Error, Result};

/// Guard against division by zero distances.
pub const NBC_EPS: f64 = 1e-12;

/// Per-point nearest-neighbour and nearest-better distances.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestBetter {
    pub nn_dist: Vec<f64>,
    pub nb_dist: Vec<f64>,
    /// Index of the nearest strictly better point; `None` for global bests.
    pub nb_index: Vec<Option<usize>>,
    /// How many points have this point as their nearest better neighbour.
    pub in_degree: Vec<usize>,
}

/// Global-best points get the largest nearest-better distance among the
/// others. Distance ties go to the lowest index.
pub fn nearest_better(design: &Design) -> Result<NearestBetter> {
    let n = design.len();
    if n < 3 {
        return Err(Error::Domain(format!("NBC features need at least 3 points, got {n}")));
    }
    let y = &design.values;
    if y.iter().all(|&v| v == y[0]) {
        return Err(Error::Degenerate("NBC undefined when all fitness values are equal".into()));
    }
    let mut nn_dist = vec![f64::INFINITY; n];
    let mut nb_dist = vec![f64::INFINITY; n];
    let mut nb_index = vec![None; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = dist(&design.points[i], &design.points[j]);
            if d < nn_dist[i] {
                nn_dist[i] = d;
            }
            if y[j] < y[i] && d < nb_dist[i] {
                nb_dist[i] = d;
                nb_index[i] = Some(j);
            }
        }
    }
    let max_nb = nb_dist
        .iter()
        .zip(&nb_index)
        .filter(|(_, b)| b.is_some())
        .map(|(d, _)| *d)
        .fold(0.0, f64::max);
    let mut in_degree = vec![0; n];
    for i in 0..n {
        match nb_index[i] {
            Some(b) => in_degree[b] += 1,
            None => nb_dist[i] = max_nb,
        }
    }
    Ok(NearestBetter {
        nn_dist,
        nb_dist,
        nb_index,
        in_degree,
    })
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sd(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

/// Pearson correlation; 0 when either side has no variance.
pub(crate) fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa <= 0.0 || sbb <= 0.0 {
        0.0
    } else {
        (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
    }
}

pub fn nbc_features(design: &Design) -> Result<NamedFeatures> {
    let nb = nearest_better(design)?;
    let ratio: Vec<f64> = nb
        .nn_dist
        .iter()
        .zip(&nb.nb_dist)
        .map(|(a, b)| a / b.max(NBC_EPS))
        .collect();
    let in_degree: Vec<f64> = nb.in_degree.iter().map(|&c| c as f64).collect();
    Ok(vec![
        ("nbc.nn_nb.sd_ratio".into(), sd(&nb.nn_dist) / sd(&nb.nb_dist).max(NBC_EPS)),
        ("nbc.nn_nb.mean_ratio".into(), mean(&nb.nn_dist) / mean(&nb.nb_dist).max(NBC_EPS)),
        ("nbc.nn_nb.cor".into(), correlation(&nb.nn_dist, &nb.nb_dist)),
        ("nbc.dist_ratio.coeff_var".into(), sd(&ratio) / mean(&ratio).max(NBC_EPS)),
        ("nbc.nb_fitness.cor".into(), correlation(&in_degree, &design.values)),
    ])
}
