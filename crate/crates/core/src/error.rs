use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no data rows")]
    EmptyInput,

    #[error("time axis is not uniformly spaced: step {index} is {found}, expected {expected}")]
    NonUniformTimeAxis {
        index: usize,
        expected: f64,
        found: f64,
    },

    #[error("missing or non-finite value at row {row}, column `{column}`")]
    MissingValue { row: usize, column: String },

    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected} values, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("window contains no points")]
    EmptyWindow,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("state size estimation needs at least 2 points, range holds {points}")]
    DegenerateRange { points: usize },

    #[error("series has {len} time steps, shorter than the window size {window_size}")]
    SeriesTooShort { len: usize, window_size: usize },

    #[error("range holds {points} FI points, at least 2 are needed for a slope")]
    RangeTooShort { points: usize },

    #[error("FI series is empty")]
    EmptySeries,

    #[error("parse error at line {line}, column `{column}`: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("network error: {0}")]
    Network(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("{indicator}: no value for year {year}")]
    GapInSeries { indicator: String, year: i32 },

    #[error("series cover different years: {0}")]
    RangeMismatch(String),

    #[error("malformed response: {0}")]
    Response(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
