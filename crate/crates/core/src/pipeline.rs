//! End-to-end run: size of state, sliding FI, regime verdict, result document.

use crate::config::{SosConfig, StateSize, WindowConfig};
use crate::error::{Error, Result};
use crate::fisher::{sliding_fi, FiSeries};
use crate::io::results::{matrix_digest, ResultDocument, RunMetadata, SosSource};
use crate::matrix::TimeSeriesMatrix;
use crate::regime::{classify_regime, RegimeVerdict, DEFAULT_SLOPE_TOL};
use crate::registry::estimators;
use crate::sos::estimate_state_size_with;

#[derive(Debug, Clone, PartialEq)]
pub enum SosChoice {
    Explicit(StateSize),
    Estimate { method: String, cfg: SosConfig },
}

impl Default for SosChoice {
    fn default() -> Self {
        SosChoice::Estimate {
            method: "sample-sd".into(),
            cfg: SosConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub window: WindowConfig,
    pub sos: SosChoice,
    pub slope_tol: f64,
    /// Inclusive time-label range for the regime verdict; whole series if unset.
    pub regime_range: Option<(f64, f64)>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            window: WindowConfig::default(),
            sos: SosChoice::default(),
            slope_tol: DEFAULT_SLOPE_TOL,
            regime_range: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: FiSeries,
    pub verdict: Option<RegimeVerdict>,
    pub document: ResultDocument,
}

pub fn resolve_state_size(
    matrix: &TimeSeriesMatrix,
    choice: &SosChoice,
) -> Result<(StateSize, SosSource)> {
    match choice {
        SosChoice::Explicit(d) => Ok((d.clone(), SosSource::Explicit)),
        SosChoice::Estimate { method, cfg } => {
            let registry = estimators();
            let estimator = registry.get(method)?;
            let d = estimate_state_size_with(estimator, matrix, cfg)?;
            Ok((
                d,
                SosSource::Estimated {
                    method: method.clone(),
                    k: cfg.k(),
                    stable_range: cfg.stable_range(),
                },
            ))
        }
    }
}

pub fn run(matrix: &TimeSeriesMatrix, cfg: &PipelineConfig) -> Result<RunOutput> {
    let (state_size, source) = resolve_state_size(matrix, &cfg.sos)?;
    let series = sliding_fi(matrix, &state_size, cfg.window)?;

    let verdict = match cfg.regime_range {
        Some((from, to)) => {
            let range = series.index_range_for_times(from, to).ok_or_else(|| {
                Error::InvalidConfig(format!("no FI points between {from} and {to}"))
            })?;
            Some(classify_regime(&series, Some(range), cfg.slope_tol)?)
        }
        None if series.len() >= 2 => Some(classify_regime(&series, None, cfg.slope_tol)?),
        None => None,
    };

    let metadata = RunMetadata {
        tool: concat!("fisher-info ", env!("CARGO_PKG_VERSION")).into(),
        variables: matrix.labels().to_vec(),
        input_rows: matrix.len(),
        input_sha256: matrix_digest(matrix),
        window_size: cfg.window.window_size(),
        increment: cfg.window.increment(),
        state_size: state_size.deltas().to_vec(),
        state_size_source: source,
        slope_tol: cfg.slope_tol,
        regime_range: cfg.regime_range,
    };
    let document = ResultDocument::new(metadata, &series, verdict.clone());
    Ok(RunOutput {
        series,
        verdict,
        document,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> TimeSeriesMatrix {
        TimeSeriesMatrix::new(
            vec!["x".into()],
            (0..n).map(|i| i as f64).collect(),
            (0..n).map(|i| vec![(i as f64 * 0.7).sin()]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_window_has_no_verdict() {
        let out = run(&ramp(8), &PipelineConfig::default()).unwrap();
        assert_eq!(out.series.len(), 1);
        assert!(out.verdict.is_none());
    }

    #[test]
    fn metadata_echoes_config() {
        let cfg = PipelineConfig {
            sos: SosChoice::Estimate {
                method: "population-sd".into(),
                cfg: SosConfig::new(1.5, Some((2, 9))).unwrap(),
            },
            regime_range: Some((10.0, 19.0)),
            ..Default::default()
        };
        let out = run(&ramp(20), &cfg).unwrap();
        let m = &out.document.metadata;
        assert_eq!(m.window_size, 8);
        assert_eq!(
            m.state_size_source,
            SosSource::Estimated {
                method: "population-sd".into(),
                k: 1.5,
                stable_range: Some((2, 9))
            }
        );
        assert_eq!(out.verdict.unwrap().slope_window, (3, 12));
    }

    #[test]
    fn unknown_estimator() {
        let cfg = PipelineConfig {
            sos: SosChoice::Estimate {
                method: "mad".into(),
                cfg: SosConfig::default(),
            },
            ..Default::default()
        };
        assert!(matches!(
            run(&ramp(10), &cfg),
            Err(Error::UnknownStrategy { .. })
        ));
    }
}
