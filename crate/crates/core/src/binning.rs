//! Partitioning a window's points into states.
//!
//! A state is a hyper-rectangle of half-widths `Δy` centred on a seed point.
//! The sweep takes the earliest unbinned point as the next seed and claims
//! every still-unbinned point inside its rectangle. Membership is tested
//! against the seed only, never chained through other members.

use serde::{Deserialize, Serialize};

use crate::config::StateSize;
use crate::error::{Error, Result};

/// Partition of window-local point indices into states, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateAssignment {
    states: Vec<Vec<usize>>,
    window_length: usize,
}

impl StateAssignment {
    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    /// Number of states `m`.
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Points per state, in discovery order.
    pub fn counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.states.iter().map(Vec::len)
    }

    /// State index of every point, indexed by point.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.window_length];
        for (s, members) in self.states.iter().enumerate() {
            for &p in members {
                labels[p] = s;
            }
        }
        labels
    }
}

/// True iff every coordinate of `a` lies within `Δy_i` of `b` (inclusive).
pub fn same_state(a: &[f64], b: &[f64], delta: &StateSize) -> Result<bool> {
    let n = delta.dims();
    for p in [a, b] {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
    }
    Ok(within(a, b, delta.deltas()))
}

#[inline]
fn within(a: &[f64], b: &[f64], deltas: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .zip(deltas)
        .all(|((x, y), d)| (x - y).abs() <= *d)
}

/// Bins the points of one window.
pub fn bin_window<P: AsRef<[f64]>>(points: &[P], delta: &StateSize) -> Result<StateAssignment> {
    if points.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let n = delta.dims();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.as_ref().len(),
        });
    }

    let deltas = delta.deltas();
    let mut binned = vec![false; points.len()];
    let mut states = Vec::new();

    for center in 0..points.len() {
        if binned[center] {
            continue;
        }
        let c = points[center].as_ref();
        let mut members = vec![center];
        binned[center] = true;
        for (j, p) in points.iter().enumerate().skip(center + 1) {
            if !binned[j] && within(c, p.as_ref(), deltas) {
                binned[j] = true;
                members.push(j);
            }
        }
        states.push(members);
    }

    Ok(StateAssignment {
        states,
        window_length: points.len(),
    })
}
