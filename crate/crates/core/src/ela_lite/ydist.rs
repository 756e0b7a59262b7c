use super::NamedFeatures;
use crate::error::{Error, Result};

/// Grid resolution for the kernel density scan.
pub const KDE_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YDistFeatures {
    /// `None` when the sample has zero variance.
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub number_of_peaks: usize,
}

impl YDistFeatures {
    pub fn named(&self) -> Result<NamedFeatures> {
        let (Some(s), Some(k)) = (self.skewness, self.kurtosis) else {
            return Err(Error::Degenerate(
                "y-distribution skewness/kurtosis undefined for zero variance".into(),
            ));
        };
        Ok(vec![
            ("ela_distr.skewness".into(), s),
            ("ela_distr.kurtosis".into(), k),
            ("ela_distr.number_of_peaks".into(), self.number_of_peaks as f64),
        ])
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    // linear interpolation between order statistics
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Rule-of-thumb bandwidth `0.9 min(sd, IQR/1.34) n^(-1/5)`.
pub fn silverman_bandwidth(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr / 1.34),
        (true, false) => sd,
        (false, true) => iqr / 1.34,
        (false, false) => 0.0,
    };
    0.9 * spread * n.powf(-0.2)
}

/// Local maxima of a Gaussian KDE scanned on [`KDE_GRID`] points spanning
/// three bandwidths beyond the data range.
pub fn count_kde_peaks(values: &[f64]) -> usize {
    let h = silverman_bandwidth(values);
    if h <= 0.0 {
        return 1;
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let step = (hi - lo) / (KDE_GRID - 1) as f64;
    let density: Vec<f64> = (0..KDE_GRID)
        .map(|g| {
            let x = lo + g as f64 * step;
            values
                .iter()
                .map(|v| {
                    let z = (x - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum()
        })
        .collect();
    // count rises followed by falls, skipping flat stretches
    let mut peaks = 0;
    let mut rising = false;
    for w in density.windows(2) {
        if w[1] > w[0] {
            rising = true;
        } else if w[1] < w[0] {
            if rising {
                peaks += 1;
            }
            rising = false;
        }
    }
    peaks.max(1)
}

/// Sample skewness `m3 / m2^1.5`, excess kurtosis `m4 / m2² - 3` and KDE peak
/// count of the objective values.
pub fn ydist_features(values: &[f64]) -> Result<YDistFeatures> {
    if values.len() < 4 {
        return Err(Error::Domain(format!(
            "y-distribution features need at least 4 values, got {}",
            values.len()
        )));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let moment = |p: i32| values.iter().map(|v| (v - mean).powi(p)).sum::<f64>() / n;
    let m2 = moment(2);
    if m2 <= 0.0 {
        return Ok(YDistFeatures {
            skewness: None,
            kurtosis: None,
            number_of_peaks: 1,
        });
    }
    Ok(YDistFeatures {
        skewness: Some(moment(3) / m2.powf(1.5)),
        kurtosis: Some(moment(4) / (m2 * m2) - 3.0),
        number_of_peaks: count_kde_peaks(values),
    })
}
