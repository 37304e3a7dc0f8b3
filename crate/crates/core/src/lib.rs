//! Linear dyadic regression with inference robust to dependence between
//! dyads whose endpoint nodes are close in a given one-dimensional ordering.
//!
//! The crate provides OLS on undirected dyadic arrays, a family of sandwich
//! variance estimators (White through the kernel-weighted dependent-node
//! dyadic estimator), a row-column moving-block jackknife, a data-driven
//! bandwidth selector, and a Monte Carlo harness for size experiments.

pub mod bandwidth;
pub mod dataset;
pub mod error;
pub mod estimate;
pub mod io;
pub mod jackknife;
pub mod kernel;
pub mod ols;
pub mod simulate;
pub mod variance;

pub use bandwidth::{scaled_bandwidth, select_bandwidth, BandwidthSelection};
pub use dataset::{
    build_dataset, build_dataset_named, endpoint_distance, expand_node_effects, Dyad, DyadRow,
    DyadicDataset, NodeOrder,
};
pub use error::{DyadError, Result};
pub use estimate::{compute_estimates, EstimatorOutput};
pub use jackknife::{
    block_deletion_sets, delete_block_fit, jk_variance, BlockDeletion, JackknifeResult,
};
pub use kernel::bartlett_weight;
pub use ols::{fit_ols, RegressionFit};
pub use simulate::{run_monte_carlo, run_sweep, SimConfig, SimResult, SweepParameter};
pub use variance::{EstimatorKind, NodeScores, TTest, VarianceEstimate};
