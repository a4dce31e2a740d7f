use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest window the method is known to behave well with.
pub const RECOMMENDED_MIN_WINDOW: usize = 8;

/// Per-variable uncertainty half-widths `Δy_i`.
///
/// Two points share a state iff `|a_i - b_i| <= Δy_i` for every variable.
/// `+∞` is allowed and makes the variable irrelevant to binning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateSize(Vec<f64>);

impl StateSize {
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidConfig(
                "state size needs at least one delta".into(),
            ));
        }
        if let Some(d) = deltas.iter().find(|d| d.is_nan() || **d < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "state size deltas must be non-negative, got {d}"
            )));
        }
        Ok(Self(deltas))
    }

    pub fn deltas(&self) -> &[f64] {
        &self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn check_dims(&self, n: usize) -> Result<()> {
        if self.dims() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.dims(),
            });
        }
        Ok(())
    }
}

/// Moving-window geometry, both fields in time steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConfig {
    window_size: usize,
    increment: usize,
}

impl WindowConfig {
    pub fn new(window_size: usize, increment: usize) -> Result<Self> {
        if window_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "window size must be at least 2, got {window_size}"
            )));
        }
        if increment == 0 || increment > window_size {
            return Err(Error::InvalidConfig(format!(
                "increment must be in 1..={window_size}, got {increment}"
            )));
        }
        if window_size < RECOMMENDED_MIN_WINDOW {
            log::warn!(
                "window size {window_size} is below the recommended minimum of {RECOMMENDED_MIN_WINDOW} time steps"
            );
        }
        Ok(Self {
            window_size,
            increment,
        })
    }

    pub fn window_size(&self) -> usize {
        self.window_size
    }

    pub fn increment(&self) -> usize {
        self.increment
    }

    /// Number of full windows that fit in a series of `len` steps.
    pub fn window_count(&self, len: usize) -> usize {
        if len < self.window_size {
            0
        } else {
            (len - self.window_size) / self.increment + 1
        }
    }
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            window_size: 8,
            increment: 1,
        }
    }
}

/// Parameters for estimating the size of state from data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SosConfig {
    k: f64,
    stable_range: Option<(usize, usize)>,
}

impl SosConfig {
    /// `stable_range` is an inclusive pair of row indices.
    pub fn new(k: f64, stable_range: Option<(usize, usize)>) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidConfig(format!("k must be positive, got {k}")));
        }
        if let Some((a, b)) = stable_range {
            if a > b {
                return Err(Error::InvalidConfig(format!(
                    "stable range start {a} exceeds end {b}"
                )));
            }
        }
        Ok(Self { k, stable_range })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn stable_range(&self) -> Option<(usize, usize)> {
        self.stable_range
    }

    /// Minimum fraction of observations within `k` standard deviations of the
    /// mean, for any distribution (Chebyshev).
    pub fn coverage_bound(&self) -> f64 {
        (1.0 - 1.0 / (self.k * self.k)).max(0.0)
    }
}

impl Default for SosConfig {
    fn default() -> Self {
        Self {
            k: 2.0,
            stable_range: None,
        }
    }
}
