//! Browser bindings for the interactive demo page in `www/`.
//!
//! The exported functions take plain numbers and return JSON strings or flat
//! arrays so the page needs no generated TypeScript types.

use std::collections::BTreeMap;

use dyadcov::dataset::endpoint_distance;
use dyadcov::simulate::{gen_ar1_nodes, ReplicationStream};
use dyadcov::{
    bartlett_weight, run_monte_carlo, select_bandwidth, Dyad, EstimatorKind, NodeScores, SimConfig,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Rates {
    pub rejection: BTreeMap<String, f64>,
    pub failures: BTreeMap<String, usize>,
    pub mean_l: f64,
}

/// Rejection frequencies of a true null for every estimator at one design point.
pub fn rates(
    n: usize,
    k: usize,
    rho: f64,
    omega: f64,
    gamma: f64,
    reps: usize,
    seed: u64,
) -> Result<Rates, String> {
    let cfg = SimConfig {
        n,
        k,
        rho,
        omega,
        gamma_het: gamma,
        reps,
        seed,
        ..SimConfig::default()
    };
    let res = run_monte_carlo(&cfg).map_err(|e| e.to_string())?;
    let name = |k: &EstimatorKind| k.as_str().to_string();
    Ok(Rates {
        rejection: res
            .estimators
            .iter()
            .map(|(k, s)| (name(k), s.rejection))
            .collect(),
        failures: res
            .estimators
            .iter()
            .map(|(k, s)| (name(k), s.failures))
            .collect(),
        mean_l: res.mean_l,
    })
}

/// Bandwidth selection on `k` independent AR(1) node-score series.
pub fn trace(
    n: usize,
    k: usize,
    rho: f64,
    seed: u64,
) -> Result<dyadcov::BandwidthSelection, String> {
    if n < 2 || k == 0 || rho.is_nan() || rho.abs() >= 1.0 {
        return Err("need n >= 2, k >= 1 and |rho| < 1".into());
    }
    let g = gen_ar1_nodes(n, rho, k, &mut ReplicationStream::new(seed, 0));
    Ok(select_bandwidth(&NodeScores(g)))
}

/// Row-major `n × n` grid; cell `(p, q)` with `p < q` holds the kernel weight
/// between dyad `(i, j)` and dyad `(p, q)`, other cells are NaN.
pub fn weights(n: usize, i: usize, j: usize, l: usize) -> Result<Vec<f64>, String> {
    let focus = Dyad::new(i, j)
        .filter(|d| d.j <= n)
        .ok_or("focus dyad must be two distinct nodes in 1..=n")?;
    if l == 0 {
        return Err("bandwidth must be at least 1".into());
    }
    let mut grid = vec![f64::NAN; n * n];
    for p in 1..=n {
        for q in p + 1..=n {
            let h = endpoint_distance(focus, Dyad { i: p, j: q });
            grid[(p - 1) * n + (q - 1)] = bartlett_weight(h, l);
        }
    }
    Ok(grid)
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn rejection_rates(
    n: usize,
    k: usize,
    rho: f64,
    omega: f64,
    gamma: f64,
    reps: usize,
    seed: u32,
) -> Result<String, JsError> {
    to_js(rates(n, k, rho, omega, gamma, reps, seed.into()))
}

#[wasm_bindgen]
pub fn bandwidth_trace(n: usize, k: usize, rho: f64, seed: u32) -> Result<String, JsError> {
    to_js(trace(n, k, rho, seed.into()))
}

#[wasm_bindgen]
pub fn weight_map(n: usize, i: usize, j: usize, l: usize) -> Result<Vec<f64>, JsError> {
    weights(n, i, j, l).map_err(|e| JsError::new(&e))
}
