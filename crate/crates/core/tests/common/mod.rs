//! Brute-force references kept independent of the library's code paths.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Direct reading of the sweep: point `i` seeds a state iff it lies outside
/// the rectangle of every earlier seed; every point joins the first seed (in
/// seeding order) whose rectangle contains it.
pub fn oracle_partition(points: &[Vec<f64>], delta: &[f64]) -> Vec<Vec<usize>> {
    let inside = |c: usize, p: usize| {
        let mut ok = true;
        for d in 0..delta.len() {
            if (points[c][d] - points[p][d]).abs() > delta[d] {
                ok = false;
            }
        }
        ok
    };
    let mut seeds: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if !seeds.iter().any(|&c| inside(c, i)) {
            seeds.push(i);
        }
    }
    let mut states = vec![Vec::new(); seeds.len()];
    for i in 0..points.len() {
        let s = seeds.iter().position(|&c| inside(c, i)).unwrap();
        states[s].push(i);
    }
    states
}

/// `4 Σ_{i=0}^{m} (q_i - q_{i+1})²` with `q_0 = q_{m+1} = 0`, straight from counts.
pub fn oracle_fi(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let mut q = vec![0.0];
    for &c in counts {
        q.push((c as f64 / total as f64).sqrt());
    }
    q.push(0.0);
    let mut s = 0.0;
    for i in 0..q.len() - 1 {
        s += (q[i] - q[i + 1]) * (q[i] - q[i + 1]);
    }
    4.0 * s
}

/// Smallest FI reachable with `m` states: the lowest eigenvalue of the
/// Dirichlet second-difference operator, times four.
pub fn fi_lower_bound(m: usize) -> f64 {
    8.0 * (1.0 - (std::f64::consts::PI / (m as f64 + 1.0)).cos())
}
