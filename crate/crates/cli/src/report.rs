//! JSON reports for the `fit` and `bandwidth` commands.

use anyhow::{bail, Context, Result};
use nalgebra::DVector;
use serde::Serialize;

use dyadcov::io::{read_dyad_csv, read_order_csv};
use dyadcov::variance::{effective_bandwidth, node_scores, t_test};
use dyadcov::{
    build_dataset_named, compute_estimates, expand_node_effects, fit_ols, scaled_bandwidth,
    select_bandwidth, BandwidthSelection, DyadRow, DyadicDataset, EstimatorKind, RegressionFit,
};

use crate::{DataArgs, FitArgs};

pub const SCHEMA: &str = "dyadcov/1";

#[derive(Debug, Serialize)]
pub struct DatasetSummary {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub complete: bool,
    pub fixed_effects: bool,
    pub rank_deficient: bool,
}

#[derive(Debug, Serialize)]
pub struct BandwidthReport {
    #[serde(rename = "L")]
    pub l: usize,
    pub overridden: bool,
    pub sigma_l: f64,
    pub selection: BandwidthSelection,
}

#[derive(Debug, Serialize)]
pub struct ContrastReport {
    pub contrast: String,
    pub null: f64,
    pub estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reject: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct EstimatorReport {
    pub kind: EstimatorKind,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub beta: Vec<f64>,
    pub psd_fixed: bool,
    pub min_eigenvalue: Option<f64>,
    pub pseudo_inverse_count: usize,
    pub tests: Vec<ContrastReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub schema: &'static str,
    pub dataset: DatasetSummary,
    /// Names of the reported coefficients (node indicators omitted).
    pub regressors: Vec<String>,
    pub bandwidth: BandwidthReport,
    pub estimators: Vec<EstimatorReport>,
}

fn load(args: &DataArgs) -> Result<DyadicDataset> {
    let table = read_dyad_csv(&args.data)?;
    let ordering = read_order_csv(&args.order)?;
    let (names, rows) = if args.no_intercept {
        (table.regressor_names, table.rows)
    } else {
        let mut names = vec!["intercept".to_string()];
        names.extend(table.regressor_names);
        let rows = table
            .rows
            .into_iter()
            .map(|r| {
                let mut x = Vec::with_capacity(r.x.len() + 1);
                x.push(1.0);
                x.extend(r.x);
                DyadRow { x, ..r }
            })
            .collect();
        (names, rows)
    };
    if names.is_empty() {
        bail!("no regressors: supply x columns or drop --no-intercept");
    }
    let ds = build_dataset_named(&rows, &ordering, names)
        .with_context(|| format!("building dataset from {}", args.data.display()))?;
    Ok(if args.fixed_effects {
        expand_node_effects(&ds)?
    } else {
        ds
    })
}

fn base_columns(ds: &DyadicDataset) -> usize {
    ds.names()
        .iter()
        .take_while(|n| !n.starts_with("fe:"))
        .count()
}

fn resolve_contrast(ds: &DyadicDataset, spec: &str) -> Result<usize> {
    if let Some(c) = ds.names().iter().position(|n| n == spec) {
        return Ok(c);
    }
    match spec.parse::<usize>() {
        Ok(idx) if (1..=ds.k()).contains(&idx) => Ok(idx - 1),
        Ok(idx) => bail!("contrast index {idx} outside 1..={}", ds.k()),
        Err(_) => bail!("unknown regressor `{spec}` in --contrast"),
    }
}

fn select(ds: &DyadicDataset, fit: &RegressionFit) -> BandwidthSelection {
    select_bandwidth(&node_scores(&fit.scores, ds.dyads(), ds.n()))
}

pub fn bandwidth_report(args: &DataArgs) -> Result<BandwidthSelection> {
    let ds = load(args)?;
    let fit = fit_ols(&ds)?;
    Ok(select(&ds, &fit))
}

pub fn fit_report(args: &FitArgs) -> Result<FitReport> {
    if !(args.sigma_l > 0.0 && args.sigma_l.is_finite()) {
        bail!("--sigma-l must be positive");
    }
    if !(args.level > 0.0 && args.level < 1.0) {
        bail!("--level must lie in (0, 1)");
    }
    if args.bandwidth == Some(0) {
        bail!("--bandwidth must be at least 1");
    }
    let kinds = EstimatorKind::parse_list(&args.estimators)?;
    let ds = load(&args.data)?;
    let base = base_columns(&ds);
    let contrasts: Vec<usize> = if args.contrast.is_empty() {
        (0..base).collect()
    } else {
        args.contrast
            .iter()
            .map(|c| resolve_contrast(&ds, c))
            .collect::<Result<_>>()?
    };

    let fit = fit_ols(&ds)?;
    let selection = select(&ds, &fit);
    let requested = match args.bandwidth {
        Some(l) => l,
        None => scaled_bandwidth(selection.l, args.sigma_l),
    };
    let l = effective_bandwidth(requested, ds.n());
    let crit = dyadcov::variance::critical_value(args.level);
    let beta: Vec<f64> = fit.beta_hat.iter().take(base).copied().collect();

    let estimators = compute_estimates(&ds, &fit, l, &kinds, args.psd_fix)
        .into_iter()
        .map(|out| {
            let l_used = out.kind.uses_bandwidth().then_some(l);
            match out.estimate {
                Ok(v) => {
                    let tests = contrasts
                        .iter()
                        .map(|&c| {
                            let mut a = DVector::zeros(ds.k());
                            a[c] = 1.0;
                            let name = ds.names()[c].clone();
                            match t_test(&fit.beta_hat, &v.v, &a, args.null_value) {
                                Ok(t) => ContrastReport {
                                    contrast: name,
                                    null: args.null_value,
                                    estimate: t.estimate,
                                    se: Some(t.se),
                                    t: Some(t.t),
                                    p: Some(t.p),
                                    reject: Some(t.t.abs() > crit),
                                    error: None,
                                },
                                Err(e) => ContrastReport {
                                    contrast: name,
                                    null: args.null_value,
                                    estimate: fit.beta_hat[c],
                                    se: None,
                                    t: None,
                                    p: None,
                                    reject: None,
                                    error: Some(e.to_string()),
                                },
                            }
                        })
                        .collect();
                    EstimatorReport {
                        kind: out.kind,
                        l: l_used,
                        beta: beta.clone(),
                        psd_fixed: v.psd_fixed,
                        min_eigenvalue: Some(v.min_eigenvalue),
                        pseudo_inverse_count: out.pseudo_inverse_used,
                        tests,
                        error: None,
                    }
                }
                Err(e) => EstimatorReport {
                    kind: out.kind,
                    l: l_used,
                    beta: beta.clone(),
                    psd_fixed: false,
                    min_eigenvalue: None,
                    pseudo_inverse_count: out.pseudo_inverse_used,
                    tests: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    Ok(FitReport {
        schema: SCHEMA,
        dataset: DatasetSummary {
            n: ds.n(),
            m: ds.len(),
            k: ds.k(),
            complete: ds.is_complete(),
            fixed_effects: args.data.fixed_effects,
            rank_deficient: fit.rank_deficient,
        },
        regressors: ds.names()[..base].to_vec(),
        bandwidth: BandwidthReport {
            l,
            overridden: args.bandwidth.is_some(),
            sigma_l: args.sigma_l,
            selection,
        },
        estimators,
    })
}
