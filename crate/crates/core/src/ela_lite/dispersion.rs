use super::design::{dist, Design};
use super::NamedFeatures;
use crate::error::{Error, Result};

pub const DISPERSION_QUANTILES: [f64; 4] = [0.02, 0.05, 0.10, 0.25];

fn quantile_tag(q: f64) -> String {
    format!("{:02}", (q * 100.0).round() as u32)
}

fn mean_and_median(mut d: Vec<f64>) -> (f64, f64) {
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let m = d.len();
    let median = if m % 2 == 1 {
        *d.select_nth_unstable_by(m / 2, f64::total_cmp).1
    } else {
        let (_, hi, lower) = d.select_nth_unstable_by(m / 2, f64::total_cmp);
        let hi = *hi;
        let lo = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    };
    (mean, median)
}

fn pairwise(points: &[Vec<f64>], idx: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(idx.len() * idx.len().saturating_sub(1) / 2);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            out.push(dist(&points[i], &points[j]));
        }
    }
    out
}

/// Indices of the `ceil(q n)` best points (ascending value, ties by index).
pub(crate) fn best_fraction(values: &[f64], q: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let take = ((q * values.len() as f64 - 1e-9).ceil() as usize).clamp(1, values.len());
    order.truncate(take);
    order.sort_unstable();
    order
}

/// Ratio and difference of the mean and median pairwise distance among the
/// best `q` fraction of points versus all points, for each quantile.
pub fn dispersion_features(design: &Design, quantiles: &[f64]) -> Result<NamedFeatures> {
    let all: Vec<usize> = (0..design.len()).collect();
    if all.len() < 2 {
        return Err(Error::Feature("dispersion needs at least 2 points".into()));
    }
    let (mean_all, median_all) = mean_and_median(pairwise(&design.points, &all));
    let mut ratio_mean = Vec::new();
    let mut ratio_median = Vec::new();
    let mut diff_mean = Vec::new();
    let mut diff_median = Vec::new();
    for &q in quantiles {
        let subset = best_fraction(&design.values, q);
        if subset.len() < 2 {
            return Err(Error::Feature(format!(
                "dispersion quantile {q}: best subset has {} point(s), need 2",
                subset.len()
            )));
        }
        let (mean_q, median_q) = mean_and_median(pairwise(&design.points, &subset));
        let tag = quantile_tag(q);
        ratio_mean.push((format!("disp.ratio_mean_{tag}"), mean_q / mean_all));
        ratio_median.push((format!("disp.ratio_median_{tag}"), median_q / median_all));
        diff_mean.push((format!("disp.diff_mean_{tag}"), mean_q - mean_all));
        diff_median.push((format!("disp.diff_median_{tag}"), median_q - median_all));
    }
    Ok([ratio_mean, ratio_median, diff_mean, diff_median].concat())
}

#[cfg(test)]
mod tests {
    use super::super::design::Bounds;
    use super::*;

    fn get(f: &NamedFeatures, name: &str) -> f64 {
        f.iter().find(|(n, _)| n == name).unwrap().1
    }

    #[test]
    fn names_follow_flacco() {
        let b = Bounds::uniform(1, 0.0, 10.0).unwrap();
        let pts: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64 / 10.0]).collect();
        let d = Design::evaluate(pts, b, |x| x[0]).unwrap();
        let f = dispersion_features(&d, &DISPERSION_QUANTILES).unwrap();
        assert_eq!(f.len(), 16);
        assert_eq!(f[0].0, "disp.ratio_mean_02");
        assert_eq!(f[15].0, "disp.diff_median_25");
    }

    #[test]
    fn two_points_full_quantile() {
        let b = Bounds::uniform(2, 0.0, 1.0).unwrap();
        let d = Design::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]], vec![3.0, 1.0], b).unwrap();
        let f = dispersion_features(&d, &[1.0]).unwrap();
        assert_eq!(get(&f, "disp.ratio_mean_100"), 1.0);
        assert_eq!(get(&f, "disp.diff_median_100"), 0.0);
    }

    #[test]
    fn tiny_quantile_subset_is_error() {
        let b = Bounds::uniform(1, 0.0, 1.0).unwrap();
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 20.0]).collect();
        let d = Design::evaluate(pts, b, |x| x[0]).unwrap();
        let err = dispersion_features(&d, &[0.02]).unwrap_err();
        assert!(err.to_string().contains("0.02"), "{err}");
    }

    #[test]
    fn best_fraction_breaks_ties_by_index() {
        assert_eq!(best_fraction(&[1.0, 1.0, 1.0, 1.0], 0.5), vec![0, 1]);
        assert_eq!(best_fraction(&[4.0, 3.0, 2.0, 1.0], 0.25), vec![3]);
    }
}
