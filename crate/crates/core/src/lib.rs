//! Discrete Fisher information (FI) over multivariate time series.
//!
//! Points of a moving window are binned into states of size `Δy`, state
//! probabilities become amplitudes `q = sqrt(p)`, and each window scores
//! `FI = 4 Σ (q_i - q_{i+1})²` with zero amplitudes padded at both ends.
//! The resulting FI trajectory is classified as stable, declining or
//! increasing by its least-squares slope.

pub mod binning;
pub mod cli;
pub mod config;
pub mod error;
pub mod fisher;
pub mod io;
pub mod matrix;
pub mod pipeline;
pub mod regime;
pub mod registry;
pub mod sos;
pub mod worldbank;

pub use binning::{bin_window, same_state, StateAssignment};
pub use config::{SosConfig, StateSize, WindowConfig};
pub use error::{Error, Result};
pub use fisher::{
    fisher_index, sliding_fi, state_probabilities, window_fi, FiPoint, FiSeries, StateDistribution,
    FI_MAX,
};
pub use matrix::{validate_matrix, RawTable, TimeSeriesMatrix};
pub use regime::{classify_regime, fi_slope, Regime, RegimeVerdict};
pub use sos::{estimate_state_size, estimate_state_size_with, StateSizeEstimator};
