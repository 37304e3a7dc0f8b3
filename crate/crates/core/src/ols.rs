//! Least squares on a dyadic design.
//!
//! Coefficients come from a thin SVD of `X`. Singular values at or below
//! [`RANK_TOLERANCE`] times the largest one are treated as zero, which gives
//! the Moore-Penrose (minimum-norm) solution on rank-deficient designs.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dataset::DyadicDataset;
use crate::error::{DyadError, Result};

/// Relative singular-value cutoff for rank decisions.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub beta_hat: DVector<f64>,
    /// `X'X`
    pub gram: DMatrix<f64>,
    /// `(X'X)^{-1}`, or its pseudo-inverse when `rank_deficient`.
    pub gram_inv: DMatrix<f64>,
    /// `X'y`
    pub moment: DVector<f64>,
    pub residuals: DVector<f64>,
    /// Row `m` is `x_m * u_m`.
    pub scores: DMatrix<f64>,
    pub rank: usize,
    pub rank_deficient: bool,
}

impl RegressionFit {
    pub fn nobs(&self) -> usize {
        self.residuals.len()
    }

    pub fn k(&self) -> usize {
        self.beta_hat.len()
    }

    pub fn rss(&self) -> f64 {
        self.residuals.norm_squared()
    }
}

pub fn fit_ols(ds: &DyadicDataset) -> Result<RegressionFit> {
    let x = ds.x();
    let y = ds.y();
    let (m, k) = x.shape();
    if m == 0 || k == 0 || m < k {
        return Err(DyadError::EmptyDataset { rows: m, cols: k });
    }

    let svd = x.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V'");
    let s = &svd.singular_values;
    let s_max = s.max();
    let cutoff = RANK_TOLERANCE * s_max;

    let uty = u.tr_mul(y);
    let mut beta_hat = DVector::zeros(k);
    let mut gram_inv = DMatrix::zeros(k, k);
    let mut rank = 0;
    for c in 0..s.len() {
        let sv = s[c];
        if sv <= cutoff || sv == 0.0 {
            continue;
        }
        rank += 1;
        let vc = v_t.row(c).transpose();
        beta_hat.axpy(uty[c] / sv, &vc, 1.0);
        gram_inv.ger(1.0 / (sv * sv), &vc, &vc, 1.0);
    }

    let gram = x.tr_mul(x);
    let moment = x.tr_mul(y);
    let residuals = y - x * &beta_hat;
    let mut scores = x.clone();
    for (mut row, u) in scores.row_iter_mut().zip(residuals.iter()) {
        row *= *u;
    }
    Ok(RegressionFit {
        beta_hat,
        gram,
        gram_inv,
        moment,
        residuals,
        scores,
        rank,
        rank_deficient: rank < k,
    })
}

/// Pseudo-inverse of a symmetric matrix by eigendecomposition.
///
/// Returns the inverse and a flag set when any eigenvalue was dropped.
pub(crate) fn pinv_symmetric(a: &DMatrix<f64>) -> (DMatrix<f64>, bool) {
    let k = a.nrows();
    let eig = SymmetricEigen::new(a.clone());
    let top = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cutoff = RANK_TOLERANCE * top;
    let mut inv = DMatrix::zeros(k, k);
    let mut dropped = false;
    for (c, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= cutoff || lambda == 0.0 {
            dropped = true;
            continue;
        }
        let vc = eig.eigenvectors.column(c);
        inv.ger(1.0 / lambda, &vc, &vc, 1.0);
    }
    (inv, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dyad, NodeOrder};

    fn complete(n: usize) -> Vec<Dyad> {
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Dyad { i, j }))
            .collect()
    }

    fn dataset(n: usize, y: Vec<f64>, x: DMatrix<f64>) -> DyadicDataset {
        let names = (1..=x.ncols()).map(|c| format!("x{c}")).collect();
        DyadicDataset::from_parts(
            NodeOrder::identity(n),
            complete(n),
            DVector::from_vec(y),
            x,
            names,
        )
        .unwrap()
    }

    #[test]
    fn intercept_only_is_mean() {
        let ds = dataset(3, vec![1.0, 2.0, 3.0], DMatrix::from_element(3, 1, 1.0));
        let fit = fit_ols(&ds).unwrap();
        assert!((fit.beta_hat[0] - 2.0).abs() < 1e-14);
        assert!(!fit.rank_deficient);
        assert!((fit.gram_inv[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_fit_has_zero_residuals() {
        let x = DMatrix::from_row_slice(6, 2, &[1., 0., 1., 1., 1., 2., 1., 3., 1., -1., 1., 5.]);
        let y: Vec<f64> = (0..6).map(|r| x[(r, 0)] - x[(r, 1)]).collect();
        let fit = fit_ols(&dataset(4, y, x)).unwrap();
        assert!((fit.beta_hat[0] - 1.0).abs() < 1e-12);
        assert!((fit.beta_hat[1] + 1.0).abs() < 1e-12);
        assert!(fit.residuals.amax() < 1e-12);
    }

    #[test]
    fn scores_are_rows_times_residuals() {
        let x = DMatrix::from_fn(6, 2, |r, c| if c == 0 { 1.0 } else { (r * r) as f64 * 0.3 });
        let y = vec![0.3, -1.0, 2.0, 0.7, 1.1, -0.4];
        let fit = fit_ols(&dataset(4, y, x.clone())).unwrap();
        for r in 0..6 {
            for c in 0..2 {
                assert_eq!(fit.scores[(r, c)], x[(r, c)] * fit.residuals[r]);
            }
        }
    }

    #[test]
    fn collinear_design_uses_pseudo_inverse() {
        let x = DMatrix::from_fn(6, 3, |r, c| match c {
            0 => 1.0,
            1 => r as f64,
            _ => 2.0 * r as f64,
        });
        let y = vec![1.0, 2.0, 2.5, 4.0, 5.5, 6.0];
        let fit = fit_ols(&dataset(4, y, x.clone())).unwrap();
        assert!(fit.rank_deficient);
        assert_eq!(fit.rank, 2);
        // normal equations still hold
        let ortho = x.tr_mul(&fit.residuals);
        assert!(ortho.amax() < 1e-10);
        // minimum-norm split between the collinear columns
        assert!((fit.beta_hat[2] - 2.0 * fit.beta_hat[1]).abs() < 1e-10);
    }

    #[test]
    fn too_few_rows() {
        let ds = dataset(2, vec![1.0], DMatrix::from_element(1, 2, 1.0));
        assert!(matches!(fit_ols(&ds), Err(DyadError::EmptyDataset { .. })));
    }

    #[test]
    fn symmetric_pinv_of_singular_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let (inv, dropped) = pinv_symmetric(&a);
        assert!(dropped);
        assert!((inv[(0, 0)] - 0.25).abs() < 1e-14);
        let (inv, dropped) = pinv_symmetric(&DMatrix::identity(3, 3));
        assert!(!dropped);
        assert!((inv - DMatrix::<f64>::identity(3, 3)).amax() < 1e-14);
    }
}
