//! Data-driven bandwidth from the autocorrelation of centered node scores.
//!
//! For each lag `h` the largest absolute componentwise autocorrelation
//! `ρ_max(h)` is compared against `c_n = sqrt(log n / n)`. The chosen lag is
//! the first `h` in `1..=h_max-4` whose next five values `ρ_max(h..=h+4)` all
//! fall below `c_n`, with `h_max = ⌊n^{2/5}⌋`. When that range is empty or no
//! lag qualifies, the bandwidth defaults to `h_max`.

use serde::Serialize;

use crate::variance::NodeScores;

/// Consecutive lags that must stay below the threshold.
const RUN_LENGTH: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandwidthSelection {
    #[serde(rename = "L")]
    pub l: usize,
    pub h_max: usize,
    pub threshold: f64,
    /// `rho_max[h - 1]` for `h = 1..=h_max`.
    pub rho_max: Vec<f64>,
    pub defaulted: bool,
}

/// `⌊n^{2/5}⌋`, at least 1, computed in exact integer arithmetic.
pub fn lag_cap(n: usize) -> usize {
    let target = (n as u128).pow(2);
    let mut h = (n as f64).powf(0.4).floor().max(0.0) as u128;
    while (h + 1).pow(5) <= target {
        h += 1;
    }
    while h > 0 && h.pow(5) > target {
        h -= 1;
    }
    (h as usize).max(1)
}

/// Lag-`h` autocorrelation of one centered column, using the lag-aligned
/// partial sums in the denominator; zero when the denominator vanishes.
fn lag_autocorrelation(col: &[f64], h: usize) -> f64 {
    let n = col.len();
    if h >= n {
        return 0.0;
    }
    let (mut cross, mut head, mut tail) = (0.0, 0.0, 0.0);
    for r in 0..n - h {
        let (a, b) = (col[r], col[r + h]);
        cross += a * b;
        head += a * a;
        tail += b * b;
    }
    let denom = head.sqrt() * tail.sqrt();
    if denom == 0.0 {
        0.0
    } else {
        cross / denom
    }
}

pub fn select_bandwidth(g: &NodeScores) -> BandwidthSelection {
    let gm = g.matrix();
    let (n, k) = gm.shape();
    let h_max = lag_cap(n);
    let threshold = ((n as f64).ln() / n as f64).sqrt();

    let columns: Vec<Vec<f64>> = (0..k)
        .map(|c| {
            let col = gm.column(c);
            let mean = col.mean();
            col.iter().map(|v| v - mean).collect()
        })
        .collect();
    let rho_max: Vec<f64> = (1..=h_max)
        .map(|h| {
            columns
                .iter()
                .map(|col| lag_autocorrelation(col, h).abs())
                .fold(0.0, f64::max)
        })
        .collect();

    let last_start = h_max.saturating_sub(RUN_LENGTH - 1);
    let selected = (1..=last_start).find(|&h| {
        rho_max[h - 1..h - 1 + RUN_LENGTH]
            .iter()
            .all(|r| *r < threshold)
    });
    let (l, defaulted) = match selected {
        Some(h) => (h, false),
        None => (h_max, true),
    };
    BandwidthSelection {
        l: l.clamp(1, h_max),
        h_max,
        threshold,
        rho_max,
        defaulted,
    }
}

/// `round(σ_L · L)` (half away from zero), at least 1.
pub fn scaled_bandwidth(l: usize, sigma_l: f64) -> usize {
    ((sigma_l * l as f64).round() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn lag_cap_values() {
        assert_eq!(lag_cap(156), 7);
        assert_eq!(lag_cap(50), 4);
        assert_eq!(lag_cap(200), 8);
        assert_eq!(lag_cap(32), 4); // exact power
        assert_eq!(lag_cap(2), 1);
        // brute force against the defining inequality
        for n in 2..5000usize {
            let h = lag_cap(n);
            assert!(h.pow(5) <= n * n || h == 1);
            assert!((h + 1).pow(5) > n * n);
        }
    }

    #[test]
    fn zero_scores_select_first_lag() {
        let sel = select_bandwidth(&NodeScores(DMatrix::zeros(200, 3)));
        assert_eq!(sel.l, 1);
        assert!(!sel.defaulted);
        assert!(sel.rho_max.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn small_arrays_default_to_cap() {
        let g = NodeScores(DMatrix::from_fn(50, 2, |r, c| {
            ((r * 31 + c * 7) % 13) as f64
        }));
        let sel = select_bandwidth(&g);
        assert_eq!(sel.h_max, 4);
        assert_eq!(sel.l, 4);
        assert!(sel.defaulted);
    }

    #[test]
    fn cap_and_threshold_at_156_nodes() {
        let sel = select_bandwidth(&NodeScores(DMatrix::zeros(156, 1)));
        assert_eq!(sel.h_max, 7);
        assert_eq!(sel.rho_max.len(), 7);
        assert!((sel.threshold - (156f64.ln() / 156.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn persistent_scores_never_pass_threshold() {
        // a linear trend is strongly autocorrelated at every lag
        let g = NodeScores(DMatrix::from_fn(400, 1, |r, _| r as f64));
        let sel = select_bandwidth(&g);
        assert!(sel.defaulted);
        assert_eq!(sel.l, sel.h_max);
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(scaled_bandwidth(4, 1.0), 4);
        assert_eq!(scaled_bandwidth(4, 0.1), 1);
        assert_eq!(scaled_bandwidth(7, 1.5), 11);
    }
}
