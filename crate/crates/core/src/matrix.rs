//! The system trajectory: `n` variables sampled over `T` uniform time steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on the spacing between consecutive time stamps.
pub const TIME_STEP_RTOL: f64 = 1e-9;

/// Unvalidated table as it comes out of a parser.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTable {
    pub labels: Vec<String>,
    pub times: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

/// Validated, immutable time series matrix.
///
/// Row `j` is the point `v_j = (y_1(t_j), ..., y_n(t_j))`. Time stamps are
/// carried for labelling output only; all window arithmetic uses row indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesMatrix {
    labels: Vec<String>,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeriesMatrix {
    pub fn new(labels: Vec<String>, times: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        validate_matrix(RawTable {
            labels,
            times,
            rows,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of time steps `T`.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of variables `n`.
    pub fn dims(&self) -> usize {
        self.labels.len()
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let n = self.dims();
        &self.values[j * n..(j + 1) * n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dims())
    }

    /// Rows `start..end` as point slices.
    pub fn window(&self, start: usize, end: usize) -> Vec<&[f64]> {
        (start..end).map(|j| self.row(j)).collect()
    }

    pub fn column(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[i])
    }

    pub fn to_raw(&self) -> RawTable {
        RawTable {
            labels: self.labels.clone(),
            times: self.times.clone(),
            rows: self.rows().map(<[f64]>::to_vec).collect(),
        }
    }
}

/// Checks a parsed table and turns it into a [`TimeSeriesMatrix`].
///
/// Values are never altered; missing cells are rejected rather than imputed.
pub fn validate_matrix(raw: RawTable) -> Result<TimeSeriesMatrix> {
    let RawTable {
        labels,
        times,
        rows,
    } = raw;

    if rows.is_empty() || times.is_empty() {
        return Err(Error::EmptyInput);
    }
    if labels.is_empty() {
        return Err(Error::InvalidConfig(
            "at least one variable is required".into(),
        ));
    }
    if rows.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: rows.len(),
        });
    }

    let n = labels.len();
    let mut values = Vec::with_capacity(rows.len() * n);
    for (j, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::RaggedRow {
                row: j,
                expected: n,
                found: row.len(),
            });
        }
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::MissingValue {
                row: j,
                column: labels[i].clone(),
            });
        }
        values.extend_from_slice(row);
    }

    check_time_axis(&times)?;

    Ok(TimeSeriesMatrix {
        labels,
        times,
        values,
    })
}

fn check_time_axis(times: &[f64]) -> Result<()> {
    if let Some(j) = times.iter().position(|t| !t.is_finite()) {
        return Err(Error::MissingValue {
            row: j,
            column: "time".into(),
        });
    }
    if times.len() < 2 {
        return Ok(());
    }
    let step = times[1] - times[0];
    if step <= 0.0 {
        return Err(Error::NonUniformTimeAxis {
            index: 1,
            expected: f64::NAN,
            found: step,
        });
    }
    for (k, pair) in times.windows(2).enumerate().skip(1) {
        let found = pair[1] - pair[0];
        if (found - step).abs() > TIME_STEP_RTOL * step.abs() {
            return Err(Error::NonUniformTimeAxis {
                index: k + 1,
                expected: step,
                found,
            });
        }
    }
    Ok(())
}
