//! Row-column moving-block jackknife.
//!
//! Block `ℓ` removes the consecutive nodes `ℓ..ℓ+L-1` together with every
//! dyad touching them. Delete-block coefficients come from updating the
//! full-sample cross-products rather than refitting.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::dataset::{incidence, Dyad, DyadicDataset};
use crate::error::{DyadError, Result};
use crate::ols::{pinv_symmetric, RegressionFit};
use crate::variance::{clip_negative, meat_white, EstimatorKind, VarianceEstimate};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockDeletion {
    /// First node of the block (1-based).
    pub start: usize,
    pub block: RangeInclusive<usize>,
    /// Indices of dyads with an endpoint in the block, ascending.
    pub touched: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct JackknifeResult {
    pub block_len: usize,
    /// Uncorrected moving-block variance.
    pub v0: DMatrix<f64>,
    /// `v0` minus the full-sample White sandwich.
    pub v: DMatrix<f64>,
    /// Row `ℓ - 1` holds the delete-block coefficients.
    pub deleted_betas: DMatrix<f64>,
    pub pseudo_inverse_used: usize,
}

impl JackknifeResult {
    pub fn estimate(&self, corrected: bool, psd_fix: bool) -> VarianceEstimate {
        let (kind, v) = if corrected {
            (EstimatorKind::Jk, &self.v)
        } else {
            (EstimatorKind::JkNoDc, &self.v0)
        };
        let eig = SymmetricEigen::new(v.clone());
        let min_eigenvalue = eig.eigenvalues.min();
        let (v, psd_fixed) = if psd_fix && min_eigenvalue < 0.0 {
            (clip_negative(eig), true)
        } else {
            (v.clone(), false)
        };
        VarianceEstimate {
            kind,
            v,
            bandwidth: Some(self.block_len),
            min_eigenvalue,
            psd_fixed,
        }
    }
}

pub fn block_deletion_sets(dyads: &[Dyad], n: usize, l: usize) -> Result<Vec<BlockDeletion>> {
    if l == 0 || l >= n {
        return Err(DyadError::BlockTooLong { block: l, nodes: n });
    }
    let inc = incidence(dyads, n);
    Ok((1..=n - l + 1)
        .map(|start| {
            let block = start..=start + l - 1;
            let mut touched: Vec<usize> = block
                .clone()
                .flat_map(|r| inc[r - 1].iter().copied())
                .collect();
            touched.sort_unstable();
            touched.dedup();
            BlockDeletion {
                start,
                block,
                touched,
            }
        })
        .collect())
}

/// Full-sample cross-products accumulated in dyad order, so that every
/// jackknife quantity is independent of how rows happen to be stored.
struct CanonicalCross {
    /// `rank[row]` is the position of the row's dyad in sorted order.
    rank: Vec<usize>,
    gram: DMatrix<f64>,
    moment: DVector<f64>,
}

impl CanonicalCross {
    fn new(ds: &DyadicDataset) -> Self {
        let mut order: Vec<usize> = (0..ds.len()).collect();
        order.sort_unstable_by_key(|&r| ds.dyads()[r]);
        let mut rank = vec![0; ds.len()];
        for (pos, &r) in order.iter().enumerate() {
            rank[r] = pos;
        }
        let (gram, moment) = cross(ds, &order);
        Self { rank, gram, moment }
    }
}

fn cross(ds: &DyadicDataset, rows: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
    let x = ds.x().select_rows(rows);
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|&r| ds.y()[r]));
    (x.tr_mul(&x), x.tr_mul(&y))
}

fn reduced_fit(
    ds: &DyadicDataset,
    full: &CanonicalCross,
    bd: &BlockDeletion,
) -> (DVector<f64>, bool) {
    let mut deleted = vec![false; ds.len()];
    for &r in &bd.touched {
        deleted[r] = true;
    }
    let mut rows: Vec<usize> = if 2 * bd.touched.len() <= ds.len() {
        bd.touched.clone()
    } else {
        (0..ds.len()).filter(|&r| !deleted[r]).collect()
    };
    rows.sort_unstable_by_key(|&r| full.rank[r]);
    // Downdating cancels badly once most rows are gone, so the smaller side
    // is accumulated.
    let (gram, moment) = if 2 * bd.touched.len() <= ds.len() {
        let (g, b) = cross(ds, &rows);
        (&full.gram - g, &full.moment - b)
    } else {
        cross(ds, &rows)
    };
    let gram = (&gram + gram.transpose()) * 0.5;
    let (inv, dropped) = pinv_symmetric(&gram);
    (inv * moment, dropped)
}

/// Delete-block coefficients; the flag is set when the reduced gram needed a
/// pseudo-inverse.
pub fn delete_block_fit(ds: &DyadicDataset, bd: &BlockDeletion) -> (DVector<f64>, bool) {
    reduced_fit(ds, &CanonicalCross::new(ds), bd)
}

pub fn jk_variance(ds: &DyadicDataset, fit: &RegressionFit, l: usize) -> Result<JackknifeResult> {
    let blocks = block_deletion_sets(ds.dyads(), ds.n(), l)?;
    let k = fit.k();
    let full = CanonicalCross::new(ds);
    let mut deleted_betas = DMatrix::zeros(blocks.len(), k);
    let mut pseudo_inverse_used = 0;
    let mut v0 = DMatrix::zeros(k, k);
    for (b, bd) in blocks.iter().enumerate() {
        let (beta, dropped) = reduced_fit(ds, &full, bd);
        pseudo_inverse_used += usize::from(dropped);
        let diff = &beta - &fit.beta_hat;
        v0.ger(1.0, &diff, &diff, 1.0);
        deleted_betas.set_row(b, &beta.transpose());
    }
    v0 /= l as f64;
    let white = &fit.gram_inv * meat_white(&fit.scores) * &fit.gram_inv;
    let white = (&white + white.transpose()) * 0.5;
    let v = &v0 - white;
    Ok(JackknifeResult {
        block_len: l,
        v0,
        v,
        deleted_betas,
        pseudo_inverse_used,
    })
}
