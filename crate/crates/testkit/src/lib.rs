//! Brute-force reference implementations.
//!
//! Everything here is written directly from the defining double sums or by
//! refitting from scratch. Nothing calls the optimized accumulation paths in
//! `dyadcov`; only the public data types are shared. Keep it that way: these
//! functions are what the fast paths are checked against.

use dyadcov::{Dyad, DyadicDataset, NodeOrder};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn bartlett(h: usize, l: usize) -> f64 {
    let x = h as f64 / l as f64;
    if x < 1.0 {
        1.0 - x
    } else {
        0.0
    }
}

fn min_endpoint_gap(a: Dyad, b: Dyad) -> usize {
    [
        a.i.abs_diff(b.i),
        a.i.abs_diff(b.j),
        a.j.abs_diff(b.i),
        a.j.abs_diff(b.j),
    ]
    .into_iter()
    .min()
    .unwrap()
}

fn add_outer(acc: &mut DMatrix<f64>, w: f64, a: &[f64], b: &[f64]) {
    for r in 0..a.len() {
        for c in 0..b.len() {
            acc[(r, c)] += w * a[r] * b[c];
        }
    }
}

fn row(scores: &DMatrix<f64>, m: usize) -> Vec<f64> {
    scores.row(m).iter().copied().collect()
}

/// Literal double sum over ordered dyad pairs with Bartlett weights of the
/// minimum endpoint distance.
pub fn brute_meat_dn(scores: &DMatrix<f64>, dyads: &[Dyad], l: usize) -> DMatrix<f64> {
    let k = scores.ncols();
    let mut meat = DMatrix::zeros(k, k);
    for (a, &da) in dyads.iter().enumerate() {
        for (b, &db) in dyads.iter().enumerate() {
            let w = bartlett(min_endpoint_gap(da, db), l);
            if w != 0.0 {
                add_outer(&mut meat, w, &row(scores, a), &row(scores, b));
            }
        }
    }
    meat
}

/// Double sum keeping ordered pairs `(a, b)` (row indices) the predicate accepts.
pub fn brute_pairwise_meat<P>(scores: &DMatrix<f64>, dyads: &[Dyad], keep: P) -> DMatrix<f64>
where
    P: Fn(usize, usize, Dyad, Dyad) -> bool,
{
    let k = scores.ncols();
    let mut meat = DMatrix::zeros(k, k);
    for (a, &da) in dyads.iter().enumerate() {
        for (b, &db) in dyads.iter().enumerate() {
            if keep(a, b, da, db) {
                add_outer(&mut meat, 1.0, &row(scores, a), &row(scores, b));
            }
        }
    }
    meat
}

pub fn same_row(a: usize, b: usize, _: Dyad, _: Dyad) -> bool {
    a == b
}

pub fn share_first(_: usize, _: usize, da: Dyad, db: Dyad) -> bool {
    da.i == db.i
}

pub fn share_second(_: usize, _: usize, da: Dyad, db: Dyad) -> bool {
    da.j == db.j
}

pub fn share_node(_: usize, _: usize, da: Dyad, db: Dyad) -> bool {
    da.i == db.i || da.i == db.j || da.j == db.i || da.j == db.j
}

/// Two-way meat as the composition of pairwise sums: pairs sharing the first
/// index, plus pairs sharing the second, minus self-pairs.
pub fn brute_twoway(scores: &DMatrix<f64>, dyads: &[Dyad]) -> DMatrix<f64> {
    brute_pairwise_meat(scores, dyads, share_first)
        + brute_pairwise_meat(scores, dyads, share_second)
        - brute_pairwise_meat(scores, dyads, same_row)
}

/// Dyad-pair expansion of the node-level HAC: each of the four endpoint
/// pairings gets its own Bartlett weight.
pub fn brute_nodc_expansion(scores: &DMatrix<f64>, dyads: &[Dyad], l: usize) -> DMatrix<f64> {
    let k = scores.ncols();
    let mut meat = DMatrix::zeros(k, k);
    for (a, &da) in dyads.iter().enumerate() {
        for (b, &db) in dyads.iter().enumerate() {
            let w = bartlett(da.i.abs_diff(db.i), l)
                + bartlett(da.i.abs_diff(db.j), l)
                + bartlett(da.j.abs_diff(db.i), l)
                + bartlett(da.j.abs_diff(db.j), l);
            if w != 0.0 {
                add_outer(&mut meat, w, &row(scores, a), &row(scores, b));
            }
        }
    }
    meat
}

/// Moore-Penrose inverse by SVD with cutoff `1e-10 · σ_max`.
pub fn pinv(a: &DMatrix<f64>) -> (DMatrix<f64>, bool) {
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.max();
    let eps = 1e-10 * top;
    let deficient = svd.singular_values.iter().any(|s| *s <= eps);
    (
        svd.pseudo_inverse(eps).expect("eps is non-negative"),
        deficient,
    )
}

#[derive(Debug, Clone)]
pub struct BruteJk {
    pub beta_hat: DVector<f64>,
    pub v0: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub deleted_betas: Vec<DVector<f64>>,
    pub pseudo_inverse_used: usize,
}

fn cross_products(ds: &DyadicDataset, keep: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
    let k = ds.k();
    let mut gram = DMatrix::zeros(k, k);
    let mut moment = DVector::zeros(k);
    for &m in keep {
        let x = row(ds.x(), m);
        add_outer(&mut gram, 1.0, &x, &x);
        for c in 0..k {
            moment[c] += x[c] * ds.y()[m];
        }
    }
    (gram, moment)
}

/// Moving-block jackknife by refitting on each surviving sample from scratch.
pub fn brute_jk(ds: &DyadicDataset, l: usize) -> BruteJk {
    let n = ds.n();
    let all: Vec<usize> = (0..ds.len()).collect();
    let (gram, moment) = cross_products(ds, &all);
    let (gram_inv, _) = pinv(&gram);
    let beta_hat = &gram_inv * moment;

    let mut v0 = DMatrix::zeros(ds.k(), ds.k());
    let mut deleted_betas = Vec::new();
    let mut pseudo_inverse_used = 0;
    for start in 1..=n - l + 1 {
        let in_block = |r: usize| r >= start && r < start + l;
        let keep: Vec<usize> = all
            .iter()
            .copied()
            .filter(|&m| {
                let d = ds.dyads()[m];
                !in_block(d.i) && !in_block(d.j)
            })
            .collect();
        let (g, b) = cross_products(ds, &keep);
        let (inv, deficient) = if keep.is_empty() {
            (DMatrix::zeros(ds.k(), ds.k()), true)
        } else {
            pinv(&g)
        };
        pseudo_inverse_used += usize::from(deficient);
        let beta = inv * b;
        let diff = (&beta - &beta_hat).iter().copied().collect::<Vec<_>>();
        add_outer(&mut v0, 1.0 / l as f64, &diff, &diff);
        deleted_betas.push(beta);
    }

    let mut white = DMatrix::zeros(ds.k(), ds.k());
    for m in 0..ds.len() {
        let x = row(ds.x(), m);
        let u = ds.y()[m]
            - x.iter()
                .zip(beta_hat.iter())
                .map(|(a, b)| a * b)
                .sum::<f64>();
        let s: Vec<f64> = x.iter().map(|v| v * u).collect();
        add_outer(&mut white, 1.0, &s, &s);
    }
    let v = &v0 - &gram_inv * white * &gram_inv;
    BruteJk {
        beta_hat,
        v0,
        v,
        deleted_betas,
        pseudo_inverse_used,
    }
}

/// Normal equations solved by explicit inversion of `X'X`.
pub fn normal_equation_beta(ds: &DyadicDataset) -> DVector<f64> {
    let all: Vec<usize> = (0..ds.len()).collect();
    let (gram, moment) = cross_products(ds, &all);
    gram.try_inverse().expect("full-rank design") * moment
}

/// `‖a − b‖_F / max(‖b‖_F, floor)`.
pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

/// Options for a random test dataset.
#[derive(Debug, Clone, Copy)]
pub struct InstanceSpec {
    pub n: usize,
    pub k: usize,
    /// Probability that each dyad is observed.
    pub coverage: f64,
    /// Shuffle dyad storage order.
    pub shuffle: bool,
}

/// Random dataset with an intercept column, node-correlated regressors, and
/// a heteroskedastic error.
pub fn random_dataset(spec: InstanceSpec, rng: &mut StdRng) -> DyadicDataset {
    let InstanceSpec {
        n,
        k,
        coverage,
        shuffle,
    } = spec;
    let node_x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..k).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    let node_u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let mut dyads: Vec<Dyad> = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if coverage >= 1.0 || rng.random::<f64>() < coverage {
                dyads.push(Dyad { i, j });
            }
        }
    }
    if dyads.len() <= k {
        dyads = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Dyad { i, j }))
            .collect();
    }
    if shuffle {
        dyads.shuffle(rng);
    }
    let m = dyads.len();
    let mut x = DMatrix::zeros(m, k);
    let mut y = DVector::zeros(m);
    for (r, d) in dyads.iter().enumerate() {
        for c in 0..k {
            x[(r, c)] = if c == 0 {
                1.0
            } else {
                node_x[d.i - 1][c] + node_x[d.j - 1][c] + rng.random::<f64>() - 0.5
            };
        }
        let u = (node_u[d.i - 1] + node_u[d.j - 1] + rng.random::<f64>() - 0.5)
            * (1.0 + x[(r, k - 1)].abs());
        y[r] = x.row(r).sum() + u;
    }
    let names = (1..=k).map(|c| format!("x{c}")).collect();
    DyadicDataset::from_parts(NodeOrder::identity(n), dyads, y, x, names).expect("valid instance")
}

/// Instance family for the meat comparisons: `n ∈ [6, 20]`, `K ∈ [1, 4]`,
/// `L ∈ [1, 5]`, partial coverage and shuffled storage order.
pub fn meat_instance(rng: &mut StdRng) -> (DyadicDataset, usize) {
    let n = rng.random_range(6..=20);
    let k = rng.random_range(1..=4);
    let l = rng.random_range(1..=5);
    let coverage = rng.random_range(0.4..=1.0);
    let ds = random_dataset(
        InstanceSpec {
            n,
            k,
            coverage,
            shuffle: true,
        },
        rng,
    );
    (ds, l)
}

/// Instance family for the jackknife comparisons: `n ≤ 15`, `L ≤ 3`.
///
/// Every fourth instance is small and wide enough that some delete-block
/// Gram matrices are singular.
pub fn jk_instance(rng: &mut StdRng, index: usize) -> (DyadicDataset, usize) {
    if index % 4 == 3 {
        let n = rng.random_range(5..=6);
        let k = rng.random_range(2..=4);
        let ds = random_dataset(
            InstanceSpec {
                n,
                k,
                coverage: 1.0,
                shuffle: true,
            },
            rng,
        );
        (ds, 3)
    } else {
        let n = rng.random_range(6..=15);
        let k = rng.random_range(1..=4);
        let l = rng.random_range(1..=3);
        let coverage = rng.random_range(0.5..=1.0);
        (
            random_dataset(
                InstanceSpec {
                    n,
                    k,
                    coverage,
                    shuffle: true,
                },
                rng,
            ),
            l,
        )
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dyads_sharing_a_node() {
        // (1,2) and (2,3): Δ = 0 both ways, so every ordered pair has weight 1
        let dyads = [Dyad { i: 1, j: 2 }, Dyad { i: 2, j: 3 }];
        let s = DMatrix::from_element(2, 1, 1.0);
        assert_eq!(brute_meat_dn(&s, &dyads, 3)[(0, 0)], 4.0);
        // (1,2) and (4,5) at distance 2 with L = 3: 2 self + 2 · (1/3) cross
        let dyads = [Dyad { i: 1, j: 2 }, Dyad { i: 4, j: 5 }];
        assert!((brute_meat_dn(&s, &dyads, 3)[(0, 0)] - (2.0 + 2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn unit_bandwidth_is_shared_node_sum() {
        let mut r = rng(1);
        let ds = random_dataset(
            InstanceSpec {
                n: 7,
                k: 2,
                coverage: 0.8,
                shuffle: true,
            },
            &mut r,
        );
        let s = ds.x().clone();
        let a = brute_meat_dn(&s, ds.dyads(), 1);
        let b = brute_pairwise_meat(&s, ds.dyads(), share_node);
        assert!((a - b).amax() < 1e-12);
    }

    #[test]
    fn self_pairs_only_is_white() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let dyads = [Dyad { i: 1, j: 2 }, Dyad { i: 1, j: 3 }];
        assert_eq!(
            brute_pairwise_meat(&s, &dyads, same_row),
            s.transpose() * &s
        );
    }
}
