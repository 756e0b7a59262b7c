use nalgebra::{DMatrix, SymmetricEigen};

use super::design::Design;
use super::NamedFeatures;
use crate::error::{Error, Result};

/// Cumulative explained-variance level for the component-count features.
pub const PCA_COVERAGE: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcaMode {
    Covariance,
    Correlation,
}

/// Sample covariance or correlation matrix of the columns of `data` (rows are
/// observations).
pub fn scatter_matrix(data: &[Vec<f64>], mode: PcaMode) -> Result<DMatrix<f64>> {
    let n = data.len();
    if n < 2 {
        return Err(Error::Domain(format!("PCA needs at least 2 points, got {n}")));
    }
    let d = data[0].len();
    let means: Vec<f64> = (0..d)
        .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for r in data {
        for a in 0..d {
            let da = r[a] - means[a];
            for b in a..d {
                cov[(a, b)] += da * (r[b] - means[b]);
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            cov[(a, b)] /= (n - 1) as f64;
            cov[(b, a)] = cov[(a, b)];
        }
    }
    if mode == PcaMode::Correlation {
        let sd: Vec<f64> = (0..d).map(|j| cov[(j, j)].sqrt()).collect();
        if let Some(j) = sd.iter().position(|&s| !(s > 0.0)) {
            return Err(Error::Degenerate(format!(
                "column {j} is constant; correlation PCA undefined"
            )));
        }
        for a in 0..d {
            for b in 0..d {
                cov[(a, b)] /= sd[a] * sd[b];
            }
        }
    }
    Ok(cov)
}

/// Eigenvalue shares of the scatter matrix, largest first; they sum to 1.
pub fn explained_variance(data: &[Vec<f64>], mode: PcaMode) -> Result<Vec<f64>> {
    let m = scatter_matrix(data, mode)?;
    let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().map(|v| v.max(0.0)).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = eig.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("PCA on data without variance".into()));
    }
    Ok(eig.into_iter().map(|v| v / total).collect())
}

/// Components needed to reach [`PCA_COVERAGE`] as a fraction of all
/// components, and the first component's share.
fn summarise(shares: &[f64]) -> (f64, f64) {
    let mut cum = 0.0;
    let mut needed = shares.len();
    for (i, s) in shares.iter().enumerate() {
        cum += s;
        if cum >= PCA_COVERAGE - 1e-12 {
            needed = i + 1;
            break;
        }
    }
    (needed as f64 / shares.len() as f64, shares[0])
}

pub fn pca_features(design: &Design) -> Result<NamedFeatures> {
    let x = &design.points;
    let xy: Vec<Vec<f64>> = x
        .iter()
        .zip(&design.values)
        .map(|(p, &y)| p.iter().copied().chain(std::iter::once(y)).collect())
        .collect();
    let (cov_x, pc1_cov_x) = summarise(&explained_variance(x, PcaMode::Covariance)?);
    let (cor_x, pc1_cor_x) = summarise(&explained_variance(x, PcaMode::Correlation)?);
    let (cov_init, pc1_cov_init) = summarise(&explained_variance(&xy, PcaMode::Covariance)?);
    let (cor_init, pc1_cor_init) = summarise(&explained_variance(&xy, PcaMode::Correlation)?);
    Ok(vec![
        ("ela_pca.expl_var.cov_x".into(), cov_x),
        ("ela_pca.expl_var.cor_x".into(), cor_x),
        ("ela_pca.expl_var.cov_init".into(), cov_init),
        ("ela_pca.expl_var.cor_init".into(), cor_init),
        ("ela_pca.expl_var_PC1.cov_x".into(), pc1_cov_x),
        ("ela_pca.expl_var_PC1.cor_x".into(), pc1_cor_x),
        ("ela_pca.expl_var_PC1.cov_init".into(), pc1_cov_init),
        ("ela_pca.expl_var_PC1.cor_init".into(), pc1_cor_init),
    ])
}
