//! Ordered-node dyadic data-generating process.
//!
//! Draw order (fixed, part of the reproducibility contract): the `n × K`
//! node shocks for `x` row by row, then the `n` node shocks for the error,
//! then for each dyad in lexicographic `(i, j)` order its `K` idiosyncratic
//! regressor shocks followed by one idiosyncratic error shock.

use nalgebra::{DMatrix, DVector};

use super::rng::NormalSource;
use super::SimConfig;
use crate::dataset::{Dyad, DyadicDataset, NodeOrder};

/// Stationary Gaussian AR(1) along the node index, one column per dimension.
///
/// Row 1 is standard normal; row `i` is `ρ row_{i-1} + sqrt(1-ρ²) η_i`.
pub fn gen_ar1_nodes(n: usize, rho: f64, dim: usize, src: &mut impl NormalSource) -> DMatrix<f64> {
    let scale = (1.0 - rho * rho).sqrt();
    let mut a = DMatrix::zeros(n, dim);
    for r in 0..n {
        for c in 0..dim {
            let eta = src.next_normal();
            a[(r, c)] = if r == 0 {
                eta
            } else {
                rho * a[(r - 1, c)] + scale * eta
            };
        }
    }
    a
}

/// One complete dyadic sample and the true coefficient vector (all ones).
///
/// The outcome is formed from the drawn regressors before the first column
/// is overwritten with the intercept.
pub fn gen_dyadic_sample(
    cfg: &SimConfig,
    src: &mut impl NormalSource,
) -> (DyadicDataset, DVector<f64>) {
    let (n, k) = (cfg.n, cfg.k);
    let ax = gen_ar1_nodes(n, cfg.rho, k, src);
    let au = gen_ar1_nodes(n, cfg.rho, 1, src);
    let beta = DVector::from_element(k, 1.0);

    let m = n * (n - 1) / 2;
    let mut dyads = Vec::with_capacity(m);
    let mut x = DMatrix::zeros(m, k);
    let mut y = DVector::zeros(m);
    let mut row = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            let mut xb = 0.0;
            for c in 0..k {
                let v = cfg.omega * (ax[(i - 1, c)] + ax[(j - 1, c)]) + src.next_normal();
                x[(row, c)] = v;
                xb += v * beta[c];
            }
            let v = cfg.omega * (au[(i - 1, 0)] + au[(j - 1, 0)]) + src.next_normal();
            let u = (1.0 + cfg.gamma_het * x[(row, k - 1)].abs()) * v;
            y[row] = xb + u;
            x[(row, 0)] = 1.0;
            dyads.push(Dyad { i, j });
            row += 1;
        }
    }
    let names = (1..=k).map(|c| format!("x{c}")).collect();
    let ds = DyadicDataset::from_parts(NodeOrder::identity(n), dyads, y, x, names)
        .expect("generated arrays are canonical and complete");
    (ds, beta)
}
