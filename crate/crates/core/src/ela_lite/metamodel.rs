use nalgebra::{DMatrix, DVector};

use super::design::Design;
use super::NamedFeatures;
use crate::error::{Error, Result};

/// Relative singular-value cutoff below which a design matrix counts as rank
/// deficient.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Linear,
    LinearInteractions,
    Quadratic,
    QuadraticInteractions,
}

impl ModelKind {
    /// Predictor count excluding the intercept.
    pub fn predictors(self, d: usize) -> usize {
        let pairs = d * d.saturating_sub(1) / 2;
        match self {
            ModelKind::Linear => d,
            ModelKind::LinearInteractions => d + pairs,
            ModelKind::Quadratic => 2 * d,
            ModelKind::QuadraticInteractions => 2 * d + pairs,
        }
    }

    /// Intercept, linear terms, then (if present) squares, then interactions.
    fn row(self, x: &[f64]) -> Vec<f64> {
        let mut r = Vec::with_capacity(1 + self.predictors(x.len()));
        r.push(1.0);
        r.extend_from_slice(x);
        if matches!(self, ModelKind::Quadratic | ModelKind::QuadraticInteractions) {
            r.extend(x.iter().map(|v| v * v));
        }
        if matches!(self, ModelKind::LinearInteractions | ModelKind::QuadraticInteractions) {
            for i in 0..x.len() {
                for j in (i + 1)..x.len() {
                    r.push(x[i] * x[j]);
                }
            }
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    /// Intercept first, in the column order of [`ModelKind`].
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
}

/// Ordinary least squares via SVD.
pub fn fit_model(design: &Design, kind: ModelKind) -> Result<LinearFit> {
    let n = design.len();
    let d = design.dimension();
    let p = kind.predictors(d);
    if n <= p + 1 {
        return Err(Error::Fit(format!(
            "{kind:?} model has {} parameters but only {n} points",
            p + 1
        )));
    }
    let rows: Vec<f64> = design.points.iter().flat_map(|x| kind.row(x)).collect();
    let x = DMatrix::from_row_slice(n, p + 1, &rows);
    let y = DVector::from_column_slice(&design.values);
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin / smax < RANK_TOL {
        return Err(Error::Fit(format!("{kind:?} design matrix is rank deficient")));
    }
    let beta = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::Fit(format!("{kind:?} least squares failed: {e}")))?;
    let residual = &y - &x * &beta;
    let rss = residual.norm_squared();
    let mean = y.mean();
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if tss <= 0.0 {
        return Err(Error::Degenerate("meta-model fit on constant objective values".into()));
    }
    // R² is exactly 1 only for a numerically exact fit
    let below_one = f64::from_bits(1f64.to_bits() - 1);
    let exact = rss < 1e-18 * tss;
    let frac = rss / tss;
    let dof = (n as f64 - 1.0) / (n as f64 - p as f64 - 1.0);
    let (r_squared, adj_r_squared) = if exact {
        (1.0, 1.0)
    } else {
        ((1.0 - frac).min(below_one), (1.0 - frac * dof).min(below_one))
    };
    Ok(LinearFit {
        coefficients: beta.iter().copied().collect(),
        r_squared,
        adj_r_squared,
    })
}

/// Adjusted R² of four least-squares models plus coefficient summaries of
/// the linear and pure-quadratic fits.
pub fn metamodel_features(design: &Design) -> Result<NamedFeatures> {
    let d = design.dimension();
    let lin = fit_model(design, ModelKind::Linear)?;
    let lin_int = fit_model(design, ModelKind::LinearInteractions)?;
    let quad = fit_model(design, ModelKind::Quadratic)?;
    let quad_int = fit_model(design, ModelKind::QuadraticInteractions)?;

    let abs_lin: Vec<f64> = lin.coefficients[1..].iter().map(|c| c.abs()).collect();
    let lin_min = abs_lin.iter().copied().fold(f64::INFINITY, f64::min);
    let lin_max = abs_lin.iter().copied().fold(0.0, f64::max);
    let abs_quad: Vec<f64> = quad.coefficients[1 + d..].iter().map(|c| c.abs()).collect();
    let quad_min = abs_quad.iter().copied().fold(f64::INFINITY, f64::min);
    let quad_max = abs_quad.iter().copied().fold(0.0, f64::max);
    if lin_min == 0.0 || quad_min == 0.0 {
        return Err(Error::Degenerate(
            "meta-model coefficient ratio undefined: a coefficient is exactly zero".into(),
        ));
    }
    Ok(vec![
        ("ela_meta.lin_simple.adj_r2".into(), lin.adj_r_squared),
        ("ela_meta.lin_simple.intercept".into(), lin.coefficients[0]),
        ("ela_meta.lin_simple.coef.min".into(), lin_min),
        ("ela_meta.lin_simple.coef.max".into(), lin_max),
        ("ela_meta.lin_simple.coef.max_by_min".into(), lin_max / lin_min),
        ("ela_meta.lin_w_interact.adj_r2".into(), lin_int.adj_r_squared),
        ("ela_meta.quad_simple.adj_r2".into(), quad.adj_r_squared),
        ("ela_meta.quad_simple.cond".into(), quad_max / quad_min),
        ("ela_meta.quad_w_interact.adj_r2".into(), quad_int.adj_r_squared),
    ])
}

#[cfg(test)]
mod tests {
    use super::super::design::{improved_lhs, Bounds};
    use super::*;

    fn design<F: Fn(&[f64]) -> f64>(n: usize, d: usize, f: F) -> Design {
        let b = Bounds::uniform(d, -5.0, 5.0).unwrap();
        let pts = improved_lhs(n, &b, 1).unwrap();
        Design::evaluate(pts, b, f).unwrap()
    }

    #[test]
    fn exact_linear_fit() {
        let d = design(60, 3, |x| 2.0 + x[0] - 3.0 * x[1] + 0.5 * x[2]);
        let fit = fit_model(&d, ModelKind::Linear).unwrap();
        assert!((fit.adj_r_squared - 1.0).abs() < 1e-9);
        assert!((fit.coefficients[2] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn sphere_quadratic_condition_is_one() {
        let d = design(80, 3, |x| x.iter().map(|v| v * v).sum());
        let f = metamodel_features(&d).unwrap();
        let get = |n: &str| f.iter().find(|(k, _)| k == n).unwrap().1;
        assert!((get("ela_meta.quad_simple.adj_r2") - 1.0).abs() < 1e-9);
        assert!((get("ela_meta.quad_simple.cond") - 1.0).abs() < 1e-9);
        assert_eq!(f.len(), 9);
    }

    #[test]
    fn too_few_points() {
        let d = design(8, 3, |x| x[0]);
        assert!(matches!(fit_model(&d, ModelKind::QuadraticInteractions), Err(Error::Fit(_))));
    }

    #[test]
    fn rank_deficient_design() {
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let pts: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 20.0, i as f64 / 20.0]).collect();
        let d = Design::evaluate(pts, b, |x| x[0] * 3.0 + 0.1 * (x[1] * 7.0).sin()).unwrap();
        assert!(matches!(fit_model(&d, ModelKind::Linear), Err(Error::Fit(_))));
    }

    #[test]
    fn predictor_counts() {
        assert_eq!(ModelKind::Linear.predictors(10), 10);
        assert_eq!(ModelKind::LinearInteractions.predictors(10), 55);
        assert_eq!(ModelKind::Quadratic.predictors(10), 20);
        assert_eq!(ModelKind::QuadraticInteractions.predictors(10), 65);
    }
}
