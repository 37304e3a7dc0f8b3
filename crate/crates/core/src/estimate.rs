use nalgebra::DMatrix;

use crate::dataset::DyadicDataset;
use crate::error::Result;
use crate::jackknife::jk_variance;
use crate::ols::RegressionFit;
use crate::variance::{
    meat_dn, meat_dn_nodc, meat_dyadic, meat_oneway, meat_twoway, meat_white, node_scores,
    sandwich, var_iid, ClusterSide, EstimatorKind, VarianceEstimate,
};

#[derive(Debug, Clone)]
pub struct EstimatorOutput {
    pub kind: EstimatorKind,
    pub estimate: Result<VarianceEstimate>,
    /// Delete-block fits that fell back to a pseudo-inverse (jackknife kinds only).
    pub pseudo_inverse_used: usize,
}

/// Computes every requested estimator at bandwidth `l`.
///
/// The jackknife is run once and shared by both jackknife kinds.
pub fn compute_estimates(
    ds: &DyadicDataset,
    fit: &RegressionFit,
    l: usize,
    kinds: &[EstimatorKind],
    psd_fix: bool,
) -> Vec<EstimatorOutput> {
    let scores = &fit.scores;
    let dyads = ds.dyads();
    let n = ds.n();
    let jk = kinds
        .iter()
        .any(|k| k.is_jackknife())
        .then(|| jk_variance(ds, fit, l));

    let sandwich_of =
        |meat: DMatrix<f64>, kind, bw| Ok(sandwich(&meat, &fit.gram_inv, kind, bw, psd_fix));
    kinds
        .iter()
        .map(|&kind| {
            let mut pseudo_inverse_used = 0;
            let estimate = match kind {
                EstimatorKind::Iid => var_iid(fit),
                EstimatorKind::White => sandwich_of(meat_white(scores), kind, None),
                EstimatorKind::OneWay1 => {
                    sandwich_of(meat_oneway(scores, dyads, ClusterSide::First), kind, None)
                }
                EstimatorKind::OneWay2 => {
                    sandwich_of(meat_oneway(scores, dyads, ClusterSide::Second), kind, None)
                }
                EstimatorKind::TwoWay => sandwich_of(meat_twoway(scores, dyads), kind, None),
                EstimatorKind::Dyadic => sandwich_of(meat_dyadic(scores, dyads, n), kind, None),
                EstimatorKind::DnDyadic => sandwich_of(meat_dn(scores, dyads, n, l), kind, Some(l)),
                EstimatorKind::DnDyadicNoDc => {
                    let g = node_scores(scores, dyads, n);
                    sandwich_of(meat_dn_nodc(&g, l), kind, Some(l))
                }
                EstimatorKind::Jk | EstimatorKind::JkNoDc => match jk.as_ref().expect("computed") {
                    Ok(res) => {
                        pseudo_inverse_used = res.pseudo_inverse_used;
                        Ok(res.estimate(kind == EstimatorKind::Jk, psd_fix))
                    }
                    Err(e) => Err(e.clone()),
                },
            };
            EstimatorOutput {
                kind,
                estimate,
                pseudo_inverse_used,
            }
        })
        .collect()
}
