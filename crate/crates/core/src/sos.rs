//! Size-of-state estimation: `Δy_i = k · SD_i` over a stable period.
//!
//! Chebyshev's inequality guarantees at least `1 - 1/k²` of observations lie
//! within `k` standard deviations of the mean, whatever the distribution.

use crate::config::{SosConfig, StateSize};
use crate::error::{Error, Result};
use crate::matrix::TimeSeriesMatrix;
use crate::registry::Named;

/// Spread measure used to size states.
pub trait StateSizeEstimator: Named + Send + Sync {
    fn description(&self) -> &'static str;

    /// Standard deviation of `values`, which holds at least two points.
    fn spread(&self, values: &[f64]) -> f64;
}

/// Sample standard deviation (divisor `N - 1`). The default.
pub struct SampleSd;

/// Population standard deviation (divisor `N`).
pub struct PopulationSd;

impl Named for SampleSd {
    fn name(&self) -> &'static str {
        "sample-sd"
    }
}

impl StateSizeEstimator for SampleSd {
    fn description(&self) -> &'static str {
        "sample standard deviation, divisor N-1"
    }

    fn spread(&self, values: &[f64]) -> f64 {
        (sum_sq_dev(values) / (values.len() - 1) as f64).sqrt()
    }
}

impl Named for PopulationSd {
    fn name(&self) -> &'static str {
        "population-sd"
    }
}

impl StateSizeEstimator for PopulationSd {
    fn description(&self) -> &'static str {
        "population standard deviation, divisor N"
    }

    fn spread(&self, values: &[f64]) -> f64 {
        (sum_sq_dev(values) / values.len() as f64).sqrt()
    }
}

fn sum_sq_dev(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean).powi(2)).sum()
}

/// Estimates `Δy` with the default sample standard deviation.
pub fn estimate_state_size(matrix: &TimeSeriesMatrix, cfg: &SosConfig) -> Result<StateSize> {
    estimate_state_size_with(&SampleSd, matrix, cfg)
}

pub fn estimate_state_size_with(
    estimator: &dyn StateSizeEstimator,
    matrix: &TimeSeriesMatrix,
    cfg: &SosConfig,
) -> Result<StateSize> {
    let (a, b) = cfg
        .stable_range()
        .unwrap_or((0, matrix.len().saturating_sub(1)));
    if b >= matrix.len() {
        return Err(Error::InvalidConfig(format!(
            "stable range {a}:{b} exceeds the last row index {}",
            matrix.len() - 1
        )));
    }
    let points = b - a + 1;
    if points < 2 {
        return Err(Error::DegenerateRange { points });
    }

    let deltas = (0..matrix.dims())
        .map(|i| {
            let values: Vec<f64> = matrix.column(i).skip(a).take(points).collect();
            let delta = cfg.k() * estimator.spread(&values);
            if delta == 0.0 {
                log::warn!(
                    "variable `{}` is constant over rows {a}..={b}; its size of state is 0",
                    matrix.labels()[i]
                );
            }
            delta
        })
        .collect();
    StateSize::new(deltas)
}
