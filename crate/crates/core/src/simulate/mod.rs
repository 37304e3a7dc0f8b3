//! Monte Carlo size experiments.
//!
//! Each replication generates a complete ordered-node dyadic array, fits OLS,
//! selects a bandwidth from the node scores, and tests `β_K = 1` with every
//! requested estimator against standard-normal critical values. Replications
//! are independent functions of `(seed, rep_index)`.

pub mod dgp;
pub mod rng;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DVector;
use serde::Serialize;

use crate::bandwidth::{scaled_bandwidth, select_bandwidth};
use crate::error::{DyadError, Result};
use crate::estimate::compute_estimates;
use crate::ols::fit_ols;
use crate::variance::{critical_value, effective_bandwidth, node_scores, t_test, EstimatorKind};

pub use dgp::{gen_ar1_nodes, gen_dyadic_sample};
pub use rng::{NormalSource, ReplicationStream};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub k: usize,
    pub rho: f64,
    pub omega: f64,
    pub gamma_het: f64,
    pub reps: usize,
    pub seed: u64,
    pub level: f64,
    pub estimators: Vec<EstimatorKind>,
    pub sigma_l: f64,
    pub psd_fix: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 50,
            k: 10,
            rho: 0.5,
            omega: 1.0,
            gamma_het: 0.5,
            reps: 5000,
            seed: 1,
            level: 0.05,
            estimators: EstimatorKind::ALL.to_vec(),
            sigma_l: 1.0,
            psd_fix: false,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DyadError::InvalidConfig(msg));
        if self.n < 3 {
            return bad(format!("n = {} must be at least 3", self.n));
        }
        if self.k == 0 || self.n * (self.n - 1) / 2 <= self.k {
            return bad(format!("K = {} must be in 1..M for n = {}", self.k, self.n));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return bad(format!("rho = {} must lie in [0, 1)", self.rho));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return bad(format!("omega = {} must be non-negative", self.omega));
        }
        if !(self.gamma_het >= 0.0 && self.gamma_het.is_finite()) {
            return bad(format!("gamma = {} must be non-negative", self.gamma_het));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level = {} must lie in (0, 1)", self.level));
        }
        if !(self.sigma_l > 0.0 && self.sigma_l.is_finite()) {
            return bad(format!("sigma_L = {} must be positive", self.sigma_l));
        }
        if self.estimators.is_empty() {
            return bad("no estimators requested".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Reject,
    Accept,
    /// Non-positive contrast variance; excluded from the rejection rate.
    Failure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationOutcome {
    pub rep_index: u64,
    /// Bandwidth picked by the selector, before scaling.
    pub selected_l: usize,
    pub defaulted: bool,
    /// Bandwidth actually used by the estimators.
    pub l: usize,
    pub decisions: Vec<(EstimatorKind, Decision)>,
}

/// `(selected L, defaulted, L used, per-estimator decisions)`.
pub type SampleDecisions = (usize, bool, usize, Vec<(EstimatorKind, Decision)>);

/// Decisions for an already generated sample, testing `β_K = null_value`.
pub fn test_sample(
    cfg: &SimConfig,
    ds: &crate::dataset::DyadicDataset,
    null_value: f64,
) -> Result<SampleDecisions> {
    let fit = fit_ols(ds)?;
    let g = node_scores(&fit.scores, ds.dyads(), ds.n());
    let sel = select_bandwidth(&g);
    let l = effective_bandwidth(scaled_bandwidth(sel.l, cfg.sigma_l), ds.n());
    let crit = critical_value(cfg.level);
    let mut contrast = DVector::zeros(ds.k());
    contrast[ds.k() - 1] = 1.0;
    let decisions = compute_estimates(ds, &fit, l, &cfg.estimators, cfg.psd_fix)
        .into_iter()
        .map(|out| {
            let decision = match out
                .estimate
                .and_then(|v| t_test(&fit.beta_hat, &v.v, &contrast, null_value))
            {
                Ok(t) if t.t.abs() > crit => Decision::Reject,
                Ok(_) => Decision::Accept,
                Err(_) => Decision::Failure,
            };
            (out.kind, decision)
        })
        .collect();
    Ok((sel.l, sel.defaulted, l, decisions))
}

pub fn run_replication(cfg: &SimConfig, rep_index: u64) -> ReplicationOutcome {
    let mut stream = ReplicationStream::new(cfg.seed, rep_index);
    let (ds, beta) = gen_dyadic_sample(cfg, &mut stream);
    let (selected_l, defaulted, l, decisions) = test_sample(cfg, &ds, beta[cfg.k - 1])
        .expect("validated configurations always yield a fit");
    ReplicationOutcome {
        rep_index,
        selected_l,
        defaulted,
        l,
        decisions,
    }
}

/// Outcomes for `rep_index = 1..=reps`, in that order.
pub fn replication_outcomes(cfg: &SimConfig) -> Result<Vec<ReplicationOutcome>> {
    cfg.validate()?;
    let reps = 1..=cfg.reps as u64;
    #[cfg(feature = "parallel")]
    let out = {
        use rayon::prelude::*;
        reps.into_par_iter()
            .map(|r| run_replication(cfg, r))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out = reps.map(|r| run_replication(cfg, r)).collect();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSummary {
    pub rejection: f64,
    pub rejections: usize,
    pub failures: usize,
    pub reps_effective: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub reps: usize,
    pub estimators: BTreeMap<EstimatorKind, EstimatorSummary>,
    /// Mean bandwidth used by the estimators.
    pub mean_l: f64,
    pub mean_selected_l: f64,
    pub defaulted_share: f64,
}

impl SimResult {
    pub fn rejection(&self, kind: EstimatorKind) -> Option<f64> {
        self.estimators.get(&kind).map(|s| s.rejection)
    }

    /// Folds outcomes in the order given.
    pub fn aggregate(outcomes: &[ReplicationOutcome]) -> Self {
        let mut counts: BTreeMap<EstimatorKind, (usize, usize, usize)> = BTreeMap::new();
        let (mut sum_l, mut sum_sel, mut defaulted) = (0usize, 0usize, 0usize);
        for o in outcomes {
            sum_l += o.l;
            sum_sel += o.selected_l;
            defaulted += usize::from(o.defaulted);
            for (kind, d) in &o.decisions {
                let c = counts.entry(*kind).or_default();
                match d {
                    Decision::Reject => c.0 += 1,
                    Decision::Accept => c.1 += 1,
                    Decision::Failure => c.2 += 1,
                }
            }
        }
        let reps = outcomes.len();
        let denom = reps.max(1) as f64;
        let estimators = counts
            .into_iter()
            .map(|(kind, (rej, acc, fail))| {
                let eff = rej + acc;
                let rejection = if eff == 0 {
                    0.0
                } else {
                    rej as f64 / eff as f64
                };
                (
                    kind,
                    EstimatorSummary {
                        rejection,
                        rejections: rej,
                        failures: fail,
                        reps_effective: eff,
                    },
                )
            })
            .collect();
        Self {
            reps,
            estimators,
            mean_l: sum_l as f64 / denom,
            mean_selected_l: sum_sel as f64 / denom,
            defaulted_share: defaulted as f64 / denom,
        }
    }
}

pub fn run_monte_carlo(cfg: &SimConfig) -> Result<SimResult> {
    Ok(SimResult::aggregate(&replication_outcomes(cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Rho,
    Omega,
    N,
    K,
    GammaHet,
    SigmaL,
}

impl SweepParameter {
    pub fn apply(self, base: &SimConfig, value: f64) -> Result<SimConfig> {
        let count = |v: f64| {
            if v >= 1.0 && v.fract() == 0.0 && v.is_finite() {
                Ok(v as usize)
            } else {
                Err(DyadError::InvalidConfig(format!(
                    "{self} must be a positive integer, got {v}"
                )))
            }
        };
        let mut cfg = base.clone();
        match self {
            SweepParameter::Rho => cfg.rho = value,
            SweepParameter::Omega => cfg.omega = value,
            SweepParameter::N => cfg.n = count(value)?,
            SweepParameter::K => cfg.k = count(value)?,
            SweepParameter::GammaHet => cfg.gamma_het = value,
            SweepParameter::SigmaL => cfg.sigma_l = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParameter::Rho => "rho",
            SweepParameter::Omega => "omega",
            SweepParameter::N => "n",
            SweepParameter::K => "k",
            SweepParameter::GammaHet => "gamma",
            SweepParameter::SigmaL => "sigma_l",
        })
    }
}

impl FromStr for SweepParameter {
    type Err = DyadError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "rho" => SweepParameter::Rho,
            "omega" => SweepParameter::Omega,
            "n" => SweepParameter::N,
            "k" => SweepParameter::K,
            "gamma" | "gamma_het" => SweepParameter::GammaHet,
            "sigma_l" | "sigma-l" => SweepParameter::SigmaL,
            _ => return Err(DyadError::UnknownParameter(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub result: SimResult,
}

pub fn run_sweep(
    base: &SimConfig,
    parameter: SweepParameter,
    values: &[f64],
) -> Result<Vec<SweepPoint>> {
    // validate every point before spending time on any of them
    let configs = values
        .iter()
        .map(|&v| parameter.apply(base, v))
        .collect::<Result<Vec<_>>>()?;
    configs
        .iter()
        .zip(values)
        .map(|(cfg, &value)| {
            Ok(SweepPoint {
                value,
                result: run_monte_carlo(cfg)?,
            })
        })
        .collect()
}

/// Plot-ready CSV: `value,estimator,rejection,failures,mean_L`.
pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "value,estimator,rejection,failures,mean_L")?;
    for p in points {
        for (kind, s) in &p.result.estimators {
            writeln!(
                out,
                "{},{},{:.6},{},{:.4}",
                p.value, kind, s.rejection, s.failures, p.result.mean_l
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SimConfig {
        SimConfig {
            n: 12,
            k: 3,
            reps: 20,
            ..SimConfig::default()
        }
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(small().validate().is_ok());
        for cfg in [
            SimConfig { reps: 0, ..small() },
            SimConfig {
                rho: 1.0,
                ..small()
            },
            SimConfig { n: 2, ..small() },
            SimConfig { k: 0, ..small() },
            SimConfig {
                level: 0.0,
                ..small()
            },
            SimConfig {
                sigma_l: 0.0,
                ..small()
            },
        ] {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn replications_are_deterministic() {
        let cfg = small();
        assert_eq!(run_replication(&cfg, 4), run_replication(&cfg, 4));
        assert_eq!(
            run_monte_carlo(&cfg).unwrap(),
            run_monte_carlo(&cfg).unwrap()
        );
    }

    #[test]
    fn zero_noise_sample_never_rejects() {
        let cfg = small();
        let (ds, beta) = gen_dyadic_sample(&cfg, &mut || 0.0);
        let (_, _, _, decisions) = test_sample(&cfg, &ds, beta[cfg.k - 1]).unwrap();
        assert_eq!(decisions.len(), 10);
        assert!(decisions.iter().all(|(_, d)| *d != Decision::Reject));
    }

    #[test]
    fn rejection_counts_are_consistent() {
        let res = run_monte_carlo(&small()).unwrap();
        assert_eq!(res.estimators.len(), 10);
        for s in res.estimators.values() {
            assert_eq!(s.reps_effective + s.failures, 20);
            assert!((0.0..=1.0).contains(&s.rejection));
        }
        assert!(res.mean_l >= 1.0);
    }

    #[test]
    fn sweep_shapes() {
        let base = SimConfig { reps: 3, ..small() };
        assert!(run_sweep(&base, SweepParameter::Rho, &[])
            .unwrap()
            .is_empty());
        let pts = run_sweep(&base, SweepParameter::N, &[8.0, 10.0]).unwrap();
        assert_eq!(pts.len(), 2);
        let mut buf = Vec::new();
        write_sweep_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 10);
        assert!(text.starts_with("value,estimator,rejection,failures,mean_L\n8,iid,"));
        assert!(run_sweep(&base, SweepParameter::N, &[2.5]).is_err());
        assert_eq!(
            "bogus".parse::<SweepParameter>().unwrap_err(),
            DyadError::UnknownParameter("bogus".into())
        );
    }
}
