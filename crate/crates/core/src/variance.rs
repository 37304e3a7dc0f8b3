//! Meat matrices and sandwich variance estimators for dyadic OLS.
//!
//! Every meat is a weighted sum of score outer products `s_d s_{d'}'` over
//! ordered dyad pairs. The estimators differ only in which pairs are kept and
//! how they are weighted:
//!
//! | kind        | pair weight                                             |
//! |-------------|---------------------------------------------------------|
//! | White       | `1{d = d'}`                                             |
//! | one-way     | `1{d, d'` share the first (or second) index`}`          |
//! | two-way     | one-way(first) + one-way(second) − White                |
//! | dyadic      | `1{Δ(d, d') = 0}`                                       |
//! | DN-dyadic   | `k_L(Δ(d, d'))`                                         |
//! | node HAC    | `k_L(|i-p|) + k_L(|i-q|) + k_L(|j-p|) + k_L(|j-q|)`     |
//!
//! where `Δ` is the endpoint distance and `k_L` the Bartlett kernel. No
//! degrees-of-freedom corrections are applied anywhere.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::{endpoint_distance, incidence, Dyad};
use crate::error::{DyadError, Result};
use crate::kernel::bartlett_weight;
use crate::ols::RegressionFit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Iid,
    White,
    #[serde(rename = "oneway1")]
    OneWay1,
    #[serde(rename = "oneway2")]
    OneWay2,
    #[serde(rename = "twoway")]
    TwoWay,
    Dyadic,
    #[serde(rename = "dn")]
    DnDyadic,
    #[serde(rename = "dn_nodc")]
    DnDyadicNoDc,
    #[serde(rename = "jk")]
    Jk,
    #[serde(rename = "jk_nodc")]
    JkNoDc,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 10] = [
        EstimatorKind::Iid,
        EstimatorKind::White,
        EstimatorKind::OneWay1,
        EstimatorKind::OneWay2,
        EstimatorKind::TwoWay,
        EstimatorKind::Dyadic,
        EstimatorKind::DnDyadic,
        EstimatorKind::DnDyadicNoDc,
        EstimatorKind::Jk,
        EstimatorKind::JkNoDc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Iid => "iid",
            EstimatorKind::White => "white",
            EstimatorKind::OneWay1 => "oneway1",
            EstimatorKind::OneWay2 => "oneway2",
            EstimatorKind::TwoWay => "twoway",
            EstimatorKind::Dyadic => "dyadic",
            EstimatorKind::DnDyadic => "dn",
            EstimatorKind::DnDyadicNoDc => "dn_nodc",
            EstimatorKind::Jk => "jk",
            EstimatorKind::JkNoDc => "jk_nodc",
        }
    }

    /// Whether the estimator depends on the bandwidth.
    pub fn uses_bandwidth(self) -> bool {
        matches!(
            self,
            EstimatorKind::DnDyadic
                | EstimatorKind::DnDyadicNoDc
                | EstimatorKind::Jk
                | EstimatorKind::JkNoDc
        )
    }

    pub fn is_jackknife(self) -> bool {
        matches!(self, EstimatorKind::Jk | EstimatorKind::JkNoDc)
    }

    /// Parses a comma-separated list; `all` expands to every kind.
    pub fn parse_list(s: &str) -> Result<Vec<EstimatorKind>> {
        let mut out: Vec<EstimatorKind> = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok.eq_ignore_ascii_case("all") {
                out.extend(Self::ALL);
            } else {
                out.push(tok.parse()?);
            }
        }
        out.sort_unstable();
        out.dedup();
        if out.is_empty() {
            return Err(DyadError::InvalidConfig("no estimators requested".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = DyadError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let kind = match lower.as_str() {
            "iid" => EstimatorKind::Iid,
            "white" | "hc0" => EstimatorKind::White,
            "oneway1" | "oneway" => EstimatorKind::OneWay1,
            "oneway2" => EstimatorKind::OneWay2,
            "twoway" | "tw" => EstimatorKind::TwoWay,
            "dyadic" => EstimatorKind::Dyadic,
            "dn" | "dn_dyadic" => EstimatorKind::DnDyadic,
            "dn_nodc" | "dn_dyadic_nodc" => EstimatorKind::DnDyadicNoDc,
            "jk" | "jk_dn" => EstimatorKind::Jk,
            "jk_nodc" | "jk_dn_nodc" => EstimatorKind::JkNoDc,
            _ => return Err(DyadError::InvalidConfig(format!("unknown estimator `{s}`"))),
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone)]
pub struct VarianceEstimate {
    pub kind: EstimatorKind,
    pub v: DMatrix<f64>,
    pub bandwidth: Option<usize>,
    /// Smallest eigenvalue of the meat (of `V` itself for the jackknife kinds).
    pub min_eigenvalue: f64,
    pub psd_fixed: bool,
}

/// Per-node score sums; row `r - 1` collects every dyad touching node `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeScores(pub DMatrix<f64>);

impl NodeScores {
    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterSide {
    First,
    Second,
}

fn symmetrize(a: DMatrix<f64>) -> DMatrix<f64> {
    let t = a.transpose();
    (a + t) * 0.5
}

pub fn meat_white(scores: &DMatrix<f64>) -> DMatrix<f64> {
    scores.tr_mul(scores)
}

/// Homoskedastic `RSS / (M - K) (X'X)^{-1}`.
pub fn var_iid(fit: &RegressionFit) -> Result<VarianceEstimate> {
    let (m, k) = (fit.nobs(), fit.k());
    if m <= k {
        return Err(DyadError::DegenerateDof { rows: m, cols: k });
    }
    let sigma2 = fit.rss() / (m - k) as f64;
    Ok(VarianceEstimate {
        kind: EstimatorKind::Iid,
        v: &fit.gram_inv * sigma2,
        bandwidth: None,
        min_eigenvalue: sigma2,
        psd_fixed: false,
    })
}

pub fn meat_oneway(scores: &DMatrix<f64>, dyads: &[Dyad], side: ClusterSide) -> DMatrix<f64> {
    let k = scores.ncols();
    let mut groups: HashMap<usize, usize> = HashMap::new();
    let mut sums: Vec<DVector<f64>> = Vec::new();
    for (m, d) in dyads.iter().enumerate() {
        let key = match side {
            ClusterSide::First => d.i,
            ClusterSide::Second => d.j,
        };
        let g = *groups.entry(key).or_insert_with(|| {
            sums.push(DVector::zeros(k));
            sums.len() - 1
        });
        sums[g] += scores.row(m).transpose();
    }
    let mut meat = DMatrix::zeros(k, k);
    for s in &sums {
        meat.ger(1.0, s, s, 1.0);
    }
    meat
}

/// Two-way meat by inclusion–exclusion; every dyad is its own intersection cluster.
pub fn meat_twoway(scores: &DMatrix<f64>, dyads: &[Dyad]) -> DMatrix<f64> {
    let first = meat_oneway(scores, dyads, ClusterSide::First);
    let second = meat_oneway(scores, dyads, ClusterSide::Second);
    symmetrize(first + second - meat_white(scores))
}

/// Pairs sharing a node, self-pairs included.
///
/// Computed with the same accumulator as [`meat_dn`] at `L = 1`, so the two
/// agree bit for bit.
pub fn meat_dyadic(scores: &DMatrix<f64>, dyads: &[Dyad], n: usize) -> DMatrix<f64> {
    kernel_weighted_meat(scores, dyads, n, 1)
}

/// DN-dyadic meat `Σ_d Σ_d' k_L(Δ(d, d')) s_d s_d'`.
///
/// `L >= n` is clamped to `n - 1` with a logged warning.
pub fn meat_dn(scores: &DMatrix<f64>, dyads: &[Dyad], n: usize, l: usize) -> DMatrix<f64> {
    let l = effective_bandwidth(l, n);
    kernel_weighted_meat(scores, dyads, n, l)
}

/// Clamps a bandwidth into `1..=n-1`, warning when it had to.
pub fn effective_bandwidth(l: usize, n: usize) -> usize {
    let cap = n.saturating_sub(1).max(1);
    if l >= n && n > 1 {
        log::warn!("bandwidth {l} too large for {n} nodes, clamping to {cap}");
    }
    l.clamp(1, cap)
}

/// For each dyad `d`, sums the scores of its `Δ < L` neighbors into one
/// bucket per exact distance, forms `w_d = Σ_h k_L(h) bucket_h`, and returns
/// the symmetrized `S'W`.
fn kernel_weighted_meat(scores: &DMatrix<f64>, dyads: &[Dyad], n: usize, l: usize) -> DMatrix<f64> {
    let (m, k) = scores.shape();
    if m == 0 {
        return DMatrix::zeros(k, k);
    }
    let inc = incidence(dyads, n);
    // row-major copy so each score row is contiguous
    let rows: Vec<f64> = scores.transpose().as_slice().to_vec();
    let weights: Vec<f64> = (0..l).map(|h| bartlett_weight(h, l)).collect();

    let weighted_row = |d: usize, out: &mut [f64], buckets: &mut [f64]| {
        buckets.iter_mut().for_each(|b| *b = 0.0);
        let dy = dyads[d];
        let lo_i = dy.i.saturating_sub(l - 1).max(1);
        let hi_i = (dy.i + l - 1).min(n);
        let lo_j = dy.j.saturating_sub(l - 1).max(1);
        let hi_j = (dy.j + l - 1).min(n);
        let in_window = |r: usize| (lo_i..=hi_i).contains(&r) || (lo_j..=hi_j).contains(&r);
        let nodes = (lo_i..=hi_i).chain((lo_j..=hi_j).filter(|r| !(lo_i..=hi_i).contains(r)));
        for r in nodes {
            for &e in &inc[r - 1] {
                let other = dyads[e];
                let partner = if other.i == r { other.j } else { other.i };
                // visit each neighbor once, through its smallest in-window endpoint
                if partner < r && in_window(partner) {
                    continue;
                }
                let h = endpoint_distance(dy, other);
                if h >= l {
                    continue;
                }
                let bucket = &mut buckets[h * k..(h + 1) * k];
                for (b, s) in bucket.iter_mut().zip(&rows[e * k..(e + 1) * k]) {
                    *b += *s;
                }
            }
        }
        out.iter_mut().for_each(|o| *o = 0.0);
        for (h, w) in weights.iter().enumerate() {
            for (o, b) in out.iter_mut().zip(&buckets[h * k..(h + 1) * k]) {
                *o += w * b;
            }
        }
    };

    let mut w_rows = vec![0.0; m * k];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if m * k * l >= 1 << 16 {
            w_rows.par_chunks_mut(k).enumerate().for_each_init(
                || vec![0.0; l * k],
                |buckets, (d, out)| weighted_row(d, out, buckets),
            );
        } else {
            let mut buckets = vec![0.0; l * k];
            for (d, out) in w_rows.chunks_mut(k).enumerate() {
                weighted_row(d, out, &mut buckets);
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut buckets = vec![0.0; l * k];
        for (d, out) in w_rows.chunks_mut(k).enumerate() {
            weighted_row(d, out, &mut buckets);
        }
    }
    let w = DMatrix::from_row_slice(m, k, &w_rows);
    symmetrize(scores.tr_mul(&w))
}

pub fn node_scores(scores: &DMatrix<f64>, dyads: &[Dyad], n: usize) -> NodeScores {
    let k = scores.ncols();
    let mut g = DMatrix::zeros(n, k);
    for (m, d) in dyads.iter().enumerate() {
        let s = scores.row(m);
        let mut gi = g.row_mut(d.i - 1);
        gi += s;
        let mut gj = g.row_mut(d.j - 1);
        gj += s;
    }
    NodeScores(g)
}

/// Bartlett HAC over the ordered node-score sequence, without any
/// correction for dyads counted through both endpoints.
pub fn meat_dn_nodc(g: &NodeScores, l: usize) -> DMatrix<f64> {
    let gm = g.matrix();
    let (n, k) = gm.shape();
    let mut w = DMatrix::zeros(n, k);
    for r in 0..n {
        let lo = r.saturating_sub(l - 1);
        let hi = (r + l).min(n);
        for s in lo..hi {
            let weight = bartlett_weight(r.abs_diff(s), l);
            for c in 0..k {
                w[(r, c)] += weight * gm[(s, c)];
            }
        }
    }
    symmetrize(gm.tr_mul(&w))
}

/// `gram_inv · meat · gram_inv`, optionally clipping negative meat eigenvalues first.
pub fn sandwich(
    meat: &DMatrix<f64>,
    gram_inv: &DMatrix<f64>,
    kind: EstimatorKind,
    bandwidth: Option<usize>,
    psd_fix: bool,
) -> VarianceEstimate {
    let eig = SymmetricEigen::new(meat.clone());
    let min_eigenvalue = eig.eigenvalues.min();
    let (meat, psd_fixed) = if psd_fix && min_eigenvalue < 0.0 {
        (clip_negative(eig), true)
    } else {
        (meat.clone(), false)
    };
    let v = symmetrize(gram_inv * meat * gram_inv);
    VarianceEstimate {
        kind,
        v,
        bandwidth,
        min_eigenvalue,
        psd_fixed,
    }
}

pub(crate) fn clip_negative(eig: SymmetricEigen<f64, nalgebra::Dyn>) -> DMatrix<f64> {
    let clipped = eig.eigenvalues.map(|v| v.max(0.0));
    let q = &eig.eigenvectors;
    symmetrize(q * DMatrix::from_diagonal(&clipped) * q.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub estimate: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
}

/// Two-sided normal test of `a'β = null_value`.
pub fn t_test(
    beta_hat: &DVector<f64>,
    v: &DMatrix<f64>,
    a: &DVector<f64>,
    null_value: f64,
) -> Result<TTest> {
    if a.len() != beta_hat.len() || a.iter().all(|x| *x == 0.0) {
        return Err(DyadError::InvalidContrast);
    }
    let var = (a.transpose() * v * a)[(0, 0)];
    if var.is_nan() || var <= 0.0 {
        return Err(DyadError::NonpositiveVariance(var));
    }
    let se = var.sqrt();
    let estimate = a.dot(beta_hat);
    let t = (estimate - null_value) / se;
    Ok(TTest {
        estimate,
        se,
        t,
        p: two_sided_p(t),
    })
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("valid parameters")
}

pub fn two_sided_p(t: f64) -> f64 {
    (2.0 * standard_normal().sf(t.abs())).min(1.0)
}

/// Two-sided standard-normal critical value at `level`.
pub fn critical_value(level: f64) -> f64 {
    standard_normal().inverse_cdf(1.0 - level / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<Dyad> {
        (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| Dyad { i, j }))
            .collect()
    }

    fn pseudo_scores(m: usize, k: usize, seed: u64) -> DMatrix<f64> {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        DMatrix::from_fn(m, k, |_, _| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
    }

    #[test]
    fn white_examples() {
        assert_eq!(meat_white(&DMatrix::zeros(4, 2)), DMatrix::zeros(2, 2));
        let s = DMatrix::from_row_slice(1, 2, &[1.0, 2.0]);
        assert_eq!(
            meat_white(&s),
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0])
        );
    }

    #[test]
    fn white_matches_loop() {
        let s = pseudo_scores(10, 3, 4);
        let mut expected = DMatrix::zeros(3, 3);
        for r in 0..10 {
            for a in 0..3 {
                for b in 0..3 {
                    expected[(a, b)] += s[(r, a)] * s[(r, b)];
                }
            }
        }
        assert!((meat_white(&s) - expected).amax() < 1e-12);
    }

    #[test]
    fn oneway_singletons_equal_white() {
        let dyads = vec![
            Dyad { i: 1, j: 2 },
            Dyad { i: 2, j: 3 },
            Dyad { i: 3, j: 4 },
        ];
        let s = pseudo_scores(3, 2, 9);
        assert!((meat_oneway(&s, &dyads, ClusterSide::First) - meat_white(&s)).amax() < 1e-15);
        assert!((meat_oneway(&s, &dyads, ClusterSide::Second) - meat_white(&s)).amax() < 1e-15);
    }

    #[test]
    fn oneway_single_cluster_is_rank_one() {
        let dyads = vec![
            Dyad { i: 1, j: 2 },
            Dyad { i: 1, j: 3 },
            Dyad { i: 1, j: 4 },
        ];
        let s = pseudo_scores(3, 2, 2);
        let total = s.row_sum().transpose();
        let expected = &total * total.transpose();
        assert!((meat_oneway(&s, &dyads, ClusterSide::First) - expected).amax() < 1e-15);
    }

    #[test]
    fn twoway_single_dyad_is_outer_product() {
        let s = DMatrix::from_row_slice(1, 2, &[0.5, -2.0]);
        let d = [Dyad { i: 1, j: 2 }];
        assert!((meat_twoway(&s, &d) - meat_white(&s)).amax() < 1e-15);
        assert!((meat_dyadic(&s, &d, 2) - meat_white(&s)).amax() < 1e-15);
        assert_eq!(
            meat_twoway(&DMatrix::zeros(3, 2), &complete(3)),
            DMatrix::zeros(2, 2)
        );
    }

    #[test]
    fn dyadic_disjoint_pairs_only_self_terms() {
        let d = [Dyad { i: 1, j: 2 }, Dyad { i: 3, j: 4 }];
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -1.0, 3.0]);
        assert!((meat_dyadic(&s, &d, 4) - meat_white(&s)).amax() < 1e-15);
    }

    #[test]
    fn dn_at_unit_bandwidth_is_dyadic_bitwise() {
        for seed in 0..5 {
            let dyads = complete(9);
            let s = pseudo_scores(dyads.len(), 3, seed);
            assert_eq!(meat_dn(&s, &dyads, 9, 1), meat_dyadic(&s, &dyads, 9));
        }
    }

    #[test]
    fn zero_scores_give_zero_meats() {
        let dyads = complete(6);
        let s = DMatrix::zeros(dyads.len(), 2);
        assert_eq!(meat_dn(&s, &dyads, 6, 3), DMatrix::zeros(2, 2));
        let g = node_scores(&s, &dyads, 6);
        assert_eq!(meat_dn_nodc(&g, 3), DMatrix::zeros(2, 2));
    }

    #[test]
    fn meats_scale_quadratically() {
        let dyads = complete(8);
        let s = pseudo_scores(dyads.len(), 2, 11);
        let c = 2.0;
        let sc = &s * c;
        let check = |a: DMatrix<f64>, b: DMatrix<f64>| assert!((a * (c * c) - b).amax() < 1e-12);
        check(meat_white(&s), meat_white(&sc));
        check(meat_twoway(&s, &dyads), meat_twoway(&sc, &dyads));
        check(meat_dn(&s, &dyads, 8, 3), meat_dn(&sc, &dyads, 8, 3));
        check(
            meat_dn_nodc(&node_scores(&s, &dyads, 8), 3),
            meat_dn_nodc(&node_scores(&sc, &dyads, 8), 3),
        );
    }

    #[test]
    fn node_score_examples() {
        let s = DMatrix::from_row_slice(1, 2, &[1.5, -1.0]);
        let g = node_scores(&s, &[Dyad { i: 1, j: 2 }], 4);
        assert_eq!(g.0.row(0), s.row(0));
        assert_eq!(g.0.row(1), s.row(0));
        assert_eq!(g.0.row(2).amax(), 0.0);

        let dyads = complete(3);
        let g = node_scores(&DMatrix::from_element(3, 1, 1.0), &dyads, 3);
        assert!(g.0.iter().all(|v| *v == 2.0));
    }

    #[test]
    fn node_score_column_sums_double() {
        let dyads = complete(7);
        // dyadic rationals keep the sums exact
        let s = DMatrix::from_fn(dyads.len(), 2, |r, c| {
            ((r * 7 + c * 3) % 11) as f64 * 0.25 - 1.0
        });
        let g = node_scores(&s, &dyads, 7);
        assert_eq!(g.0.row_sum(), s.row_sum() * 2.0);
    }

    #[test]
    fn nodc_unit_bandwidth_is_sum_of_outer_products() {
        let g = NodeScores(pseudo_scores(6, 2, 5));
        let expected = g.0.tr_mul(&g.0);
        assert!((meat_dn_nodc(&g, 1) - expected).amax() < 1e-14);
    }

    #[test]
    fn bandwidth_clamped_below_node_count() {
        let dyads = complete(5);
        let s = pseudo_scores(dyads.len(), 2, 3);
        assert_eq!(meat_dn(&s, &dyads, 5, 9), meat_dn(&s, &dyads, 5, 4));
    }

    #[test]
    fn sandwich_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        let v = sandwich(&id, &id, EstimatorKind::White, None, false);
        assert!((v.v - &id).amax() < 1e-15);
        let z = sandwich(
            &DMatrix::zeros(3, 3),
            &id,
            EstimatorKind::White,
            None,
            false,
        );
        assert_eq!(z.v, DMatrix::zeros(3, 3));
    }

    #[test]
    fn psd_fix_clips_negative_directions() {
        let meat = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -0.5]);
        let id = DMatrix::<f64>::identity(2, 2);
        let raw = sandwich(&meat, &id, EstimatorKind::DnDyadic, Some(2), false);
        assert!(!raw.psd_fixed);
        assert!((raw.min_eigenvalue + 0.5).abs() < 1e-14);
        let fixed = sandwich(&meat, &id, EstimatorKind::DnDyadic, Some(2), true);
        assert!(fixed.psd_fixed);
        assert!(fixed.v[(1, 1)].abs() < 1e-14);
        assert!((fixed.v[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn t_test_examples() {
        let beta = DVector::from_vec(vec![1.2]);
        let v = DMatrix::from_element(1, 1, 0.01);
        let a = DVector::from_vec(vec![1.0]);
        let r = t_test(&beta, &v, &a, 1.0).unwrap();
        assert!((r.t - 2.0).abs() < 1e-12);
        assert!((r.p - 0.045500).abs() < 5e-6);
        let r = t_test(&beta, &v, &a, 1.2).unwrap();
        assert_eq!(r.t, 0.0);
        assert!((r.p - 1.0).abs() < 1e-15);
        let err = t_test(&beta, &DMatrix::zeros(1, 1), &a, 1.0).unwrap_err();
        assert!(matches!(err, DyadError::NonpositiveVariance(_)));
        let err = t_test(&beta, &v, &DVector::zeros(1), 1.0).unwrap_err();
        assert_eq!(err, DyadError::InvalidContrast);
    }

    #[test]
    fn critical_value_at_five_percent() {
        assert!((critical_value(0.05) - 1.959964).abs() < 1e-6);
    }

    #[test]
    fn iid_intercept_example() {
        use crate::dataset::{DyadicDataset, NodeOrder};
        let ds = DyadicDataset::from_parts(
            NodeOrder::identity(3),
            complete(3),
            DVector::from_vec(vec![1.0, 2.0, 3.0]),
            DMatrix::from_element(3, 1, 1.0),
            vec!["const".into()],
        )
        .unwrap();
        let fit = crate::ols::fit_ols(&ds).unwrap();
        let v = var_iid(&fit).unwrap();
        assert!((v.v[(0, 0)] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn estimator_names_round_trip() {
        for kind in EstimatorKind::ALL {
            assert_eq!(kind.as_str().parse::<EstimatorKind>().unwrap(), kind);
        }
        assert_eq!(EstimatorKind::parse_list("all").unwrap().len(), 10);
        assert_eq!(
            EstimatorKind::parse_list("dn, white,dn").unwrap(),
            [EstimatorKind::White, EstimatorKind::DnDyadic]
        );
        assert!(EstimatorKind::parse_list("bogus").is_err());
    }
}
