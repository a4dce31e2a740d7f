//! Regime classification of an FI trajectory.
//!
//! Nearly constant non-zero FI reads as an orderly regime, a steady decline
//! as loss of stability (a possible early warning of a regime shift), a
//! steady rise as increasing organisation. "Steady" is judged by the OLS
//! slope against a configurable tolerance.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::FiSeries;

pub const DEFAULT_SLOPE_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Stable,
    Declining,
    Increasing,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Stable => "stable",
            Regime::Declining => "declining",
            Regime::Increasing => "increasing",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub category: Regime,
    /// FI units per time step.
    pub slope: f64,
    pub mean_fi: f64,
    pub tolerance: f64,
    /// Inclusive range of FI point indices analysed.
    pub slope_window: (usize, usize),
    /// Points strictly higher than both neighbours. Descriptive only.
    pub peaks: Vec<usize>,
}

/// OLS slope of `y` against `0, 1, ..., N-1`.
///
/// With evenly spaced abscissae the centred offsets are antisymmetric, so the
/// numerator pairs each point with its mirror image. A palindromic series
/// therefore yields exactly zero.
pub fn ols_slope_uniform(y: &[f64]) -> f64 {
    let n = y.len();
    let centre = (n as f64 - 1.0) / 2.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n / 2 {
        let dx = i as f64 - centre;
        num += dx * (y[i] - y[n - 1 - i]);
        den += 2.0 * dx * dx;
    }
    num / den
}

fn resolve_range(series: &FiSeries, range: Option<(usize, usize)>) -> Result<(usize, usize)> {
    let (a, b) = match range {
        Some(r) => r,
        None if series.is_empty() => return Err(Error::RangeTooShort { points: 0 }),
        None => (0, series.len() - 1),
    };
    if a > b || b >= series.len() {
        return Err(Error::InvalidConfig(format!(
            "FI range {a}..={b} is outside the series of {} points",
            series.len()
        )));
    }
    if b - a + 1 < 2 {
        return Err(Error::RangeTooShort { points: b - a + 1 });
    }
    Ok((a, b))
}

/// Slope of FI per time step over an inclusive range of point indices.
pub fn fi_slope(series: &FiSeries, range: Option<(usize, usize)>) -> Result<f64> {
    let (a, b) = resolve_range(series, range)?;
    let y: Vec<f64> = series.points[a..=b].iter().map(|p| p.fi).collect();
    Ok(ols_slope_uniform(&y) / series.config.increment() as f64)
}

pub fn local_maxima(y: &[f64]) -> Vec<usize> {
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] > y[i + 1])
        .collect()
}

pub fn classify_regime(
    series: &FiSeries,
    range: Option<(usize, usize)>,
    tol: f64,
) -> Result<RegimeVerdict> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "slope tolerance must be positive, got {tol}"
        )));
    }
    let (a, b) = resolve_range(series, range)?;
    let slope = fi_slope(series, Some((a, b)))?;
    let y: Vec<f64> = series.points[a..=b].iter().map(|p| p.fi).collect();
    let mean_fi = y.iter().sum::<f64>() / y.len() as f64;
    let category = if slope < -tol {
        Regime::Declining
    } else if slope > tol {
        Regime::Increasing
    } else {
        Regime::Stable
    };
    Ok(RegimeVerdict {
        category,
        slope,
        mean_fi,
        tolerance: tol,
        slope_window: (a, b),
        peaks: local_maxima(&y).into_iter().map(|i| i + a).collect(),
    })
}
