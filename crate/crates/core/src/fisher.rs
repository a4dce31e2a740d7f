//! State probabilities, amplitudes, the discrete FI index and the sliding
//! window driver.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binning::{bin_window, StateAssignment};
use crate::config::{StateSize, WindowConfig};
use crate::error::{Error, Result};
use crate::matrix::TimeSeriesMatrix;

/// FI of a window whose points all fall into one state.
pub const FI_MAX: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDistribution {
    probabilities: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl StateDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `q_i = sqrt(P_i)`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }
}

/// `P_i = |state_i| / window_length`, in discovery order.
pub fn state_probabilities(assignment: &StateAssignment) -> StateDistribution {
    let total = assignment.window_length() as f64;
    let probabilities: Vec<f64> = assignment.counts().map(|c| c as f64 / total).collect();
    let amplitudes = probabilities.iter().map(|p| p.sqrt()).collect();
    StateDistribution {
        probabilities,
        amplitudes,
    }
}

/// `FI = 4 Σ (q_i - q_{i+1})²` over the amplitude chain padded with a zero
/// at both ends.
pub fn fisher_index(dist: &StateDistribution) -> f64 {
    let q = dist.amplitudes();
    let (Some(first), Some(last)) = (q.first(), q.last()) else {
        return 0.0;
    };
    let interior: f64 = q.windows(2).map(|w| (w[0] - w[1]).powi(2)).sum();
    4.0 * (first * first + interior + last * last)
}

/// One FI value, attributed to the last time step of its window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiPoint {
    pub time_label: f64,
    pub fi: f64,
    pub m_states: usize,
    pub window_start_index: usize,
    pub window_end_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiSeries {
    pub points: Vec<FiPoint>,
    pub config: WindowConfig,
    pub state_size: StateSize,
}

impl FiSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.fi).collect()
    }

    /// Inclusive point-index range covering time labels `from..=to`.
    pub fn index_range_for_times(&self, from: f64, to: f64) -> Option<(usize, usize)> {
        let start = self.points.iter().position(|p| p.time_label >= from)?;
        let end = self.points.iter().rposition(|p| p.time_label <= to)?;
        (start <= end).then_some((start, end))
    }
}

/// Bins and scores a single window of points.
pub fn window_fi<P: AsRef<[f64]>>(points: &[P], delta: &StateSize) -> Result<(f64, usize)> {
    let assignment = bin_window(points, delta)?;
    let fi = fisher_index(&state_probabilities(&assignment));
    Ok((fi, assignment.state_count()))
}

/// FI for every full window of `matrix`; trailing partial windows are skipped.
///
/// Windows are scored in parallel; the output is in time order and identical
/// to a sequential evaluation.
pub fn sliding_fi(
    matrix: &TimeSeriesMatrix,
    delta: &StateSize,
    cfg: WindowConfig,
) -> Result<FiSeries> {
    delta.check_dims(matrix.dims())?;
    let w = cfg.window_size();
    if matrix.len() < w {
        return Err(Error::SeriesTooShort {
            len: matrix.len(),
            window_size: w,
        });
    }

    let count = cfg.window_count(matrix.len());
    let points = (0..count)
        .into_par_iter()
        .map(|k| {
            let start = k * cfg.increment();
            let end = start + w - 1;
            let (fi, m_states) = window_fi(&matrix.window(start, end + 1), delta)?;
            Ok(FiPoint {
                time_label: matrix.times()[end],
                fi,
                m_states,
                window_start_index: start,
                window_end_index: end,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(FiSeries {
        points,
        config: cfg,
        state_size: delta.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binning::bin_window;

    fn dist_from_counts(counts: &[usize]) -> StateDistribution {
        let total: usize = counts.iter().sum();
        let probabilities: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
        StateDistribution {
            amplitudes: probabilities.iter().map(|p| p.sqrt()).collect(),
            probabilities,
        }
    }

    #[test]
    fn worked_example_distribution_and_fi() {
        let pts = [
            [0.6, 1.5],
            [2.0, 1.5],
            [0.3, 1.0],
            [3.5, 4.8],
            [0.95, 2.0],
            [3.1, 4.0],
            [2.4, 1.8],
            [2.7, 2.1],
        ];
        let a = bin_window(&pts, &StateSize::new(vec![0.5, 1.0]).unwrap()).unwrap();
        let d = state_probabilities(&a);
        assert_eq!(d.probabilities(), &[0.375, 0.25, 0.25, 0.125]);
        let fi = fisher_index(&d);
        assert!((fi - 2.136).abs() < 0.005, "{fi}");
        // independent evaluation in Python of 4*sum((q_i-q_{i+1})^2) with zero padding
        assert!((fi - 2.1362966948437268).abs() < 1e-12);
    }

    #[test]
    fn single_state_is_max() {
        let d = dist_from_counts(&[5]);
        assert_eq!(d.probabilities(), &[1.0]);
        assert_eq!(d.amplitudes(), &[1.0]);
        assert_eq!(fisher_index(&d), FI_MAX);
    }

    #[test]
    fn uniform_law() {
        for m in 1..=12 {
            let fi = fisher_index(&dist_from_counts(&vec![3; m]));
            assert!((fi - 8.0 / m as f64).abs() < 1e-12, "m={m} fi={fi}");
        }
    }

    #[test]
    fn singletons_are_uniform() {
        let d = dist_from_counts(&[1; 8]);
        assert!(d.probabilities().iter().all(|&p| p == 0.125));
    }

    #[test]
    fn window_counts_and_stamps() {
        let times: Vec<f64> = (0..10).map(|i| 1990.0 + i as f64).collect();
        let rows = (0..10).map(|i| vec![i as f64]).collect();
        let m = TimeSeriesMatrix::new(vec!["x".into()], times, rows).unwrap();
        let d = StateSize::new(vec![1.0]).unwrap();

        let s = sliding_fi(&m, &d, WindowConfig::new(8, 2).unwrap()).unwrap();
        let spans: Vec<_> = s
            .points
            .iter()
            .map(|p| (p.window_start_index, p.window_end_index, p.time_label))
            .collect();
        assert_eq!(spans, vec![(0, 7, 1997.0), (2, 9, 1999.0)]);

        let s = sliding_fi(&m, &d, WindowConfig::new(10, 1).unwrap()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.points[0].time_label, 1999.0);

        assert!(matches!(
            sliding_fi(&m, &d, WindowConfig::new(11, 1).unwrap()),
            Err(Error::SeriesTooShort {
                len: 10,
                window_size: 11
            })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let times: Vec<f64> = (0..200).map(f64::from).collect();
        let rows = (0..200)
            .map(|i| {
                let t = i as f64;
                vec![(t * 0.37).sin() * 3.0, (t * 0.11).cos() + t * 0.01]
            })
            .collect();
        let m = TimeSeriesMatrix::new(vec!["a".into(), "b".into()], times, rows).unwrap();
        let d = StateSize::new(vec![0.8, 0.3]).unwrap();
        let cfg = WindowConfig::new(12, 3).unwrap();
        let s = sliding_fi(&m, &d, cfg).unwrap();
        for (k, p) in s.points.iter().enumerate() {
            let start = k * 3;
            let (fi, ms) = window_fi(&m.window(start, start + 12), &d).unwrap();
            assert_eq!((p.fi, p.m_states), (fi, ms));
        }
    }

    #[test]
    fn index_range_for_times() {
        let times: Vec<f64> = (1960..=2013).map(f64::from).collect();
        let rows = (0..54).map(|i| vec![i as f64]).collect();
        let m = TimeSeriesMatrix::new(vec!["x".into()], times, rows).unwrap();
        let s = sliding_fi(
            &m,
            &StateSize::new(vec![1.0]).unwrap(),
            WindowConfig::default(),
        )
        .unwrap();
        assert_eq!(s.index_range_for_times(1975.0, 2013.0), Some((8, 46)));
        assert_eq!(s.index_range_for_times(2020.0, 2030.0), None);
    }
}
