mod common;

use common::{fi_lower_bound, oracle_fi, oracle_partition};
use fisher_info::io::{read_csv, read_results_csv, write_matrix_csv, write_results_to};
use fisher_info::pipeline::{run, PipelineConfig, SosChoice};
use fisher_info::regime::ols_slope_uniform;
use fisher_info::{
    bin_window, classify_regime, fi_slope, fisher_index, sliding_fi, state_probabilities,
    validate_matrix, FiPoint, FiSeries, Regime, StateSize, TimeSeriesMatrix, WindowConfig,
};
use proptest::prelude::*;

fn window_strategy(
    max_pts: usize,
    max_dims: usize,
) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (1..=max_dims).prop_flat_map(move |n| {
        (
            prop::collection::vec(prop::collection::vec(-10.0..10.0f64, n), 1..=max_pts),
            prop::collection::vec(0.0..6.0f64, n),
        )
    })
}

fn matrix_from(rows: &[Vec<f64>]) -> TimeSeriesMatrix {
    let n = rows[0].len();
    TimeSeriesMatrix::new(
        (0..n).map(|i| format!("v{i}")).collect(),
        (0..rows.len()).map(|t| 1900.0 + t as f64).collect(),
        rows.to_vec(),
    )
    .unwrap()
}

fn series_of(values: &[f64]) -> FiSeries {
    FiSeries {
        points: values
            .iter()
            .enumerate()
            .map(|(k, &fi)| FiPoint {
                time_label: k as f64,
                fi,
                m_states: 1,
                window_start_index: k,
                window_end_index: k + 7,
            })
            .collect(),
        config: WindowConfig::default(),
        state_size: StateSize::new(vec![1.0]).unwrap(),
    }
}

proptest! {
    #[test]
    fn binning_is_a_partition_seeded_in_order((pts, d) in window_strategy(20, 4)) {
        let a = bin_window(&pts, &StateSize::new(d).unwrap()).unwrap();
        let mut all: Vec<usize> = a.states().iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..pts.len()).collect::<Vec<_>>());
        let seeds: Vec<usize> = a.states().iter().map(|s| s[0]).collect();
        prop_assert!(seeds.windows(2).all(|w| w[0] < w[1]));
        for s in a.states() {
            prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!(a.state_count() >= 1 && a.state_count() <= pts.len());
    }

    #[test]
    fn binning_matches_oracle((pts, d) in window_strategy(12, 3)) {
        let a = bin_window(&pts, &StateSize::new(d.clone()).unwrap()).unwrap();
        let expected = oracle_partition(&pts, &d);
        prop_assert_eq!(a.states(), expected.as_slice());
    }

    #[test]
    fn larger_delta_never_adds_states((pts, d) in window_strategy(20, 3), grow in 1.0..4.0f64) {
        let small = bin_window(&pts, &StateSize::new(d.clone()).unwrap()).unwrap();
        let big = bin_window(&pts, &StateSize::new(d.iter().map(|x| x * grow).collect()).unwrap()).unwrap();
        prop_assert!(big.state_count() <= small.state_count());
    }

    #[test]
    fn binning_is_deterministic((pts, d) in window_strategy(20, 3)) {
        let d = StateSize::new(d).unwrap();
        prop_assert_eq!(bin_window(&pts, &d).unwrap(), bin_window(&pts, &d).unwrap());
    }

    #[test]
    fn binning_survives_power_of_two_scaling((pts, d) in window_strategy(16, 3), e in -8i32..8) {
        let f = 2f64.powi(e);
        let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| x * f).collect()).collect();
        let a = bin_window(&pts, &StateSize::new(d.clone()).unwrap()).unwrap();
        let b = bin_window(&scaled, &StateSize::new(d.iter().map(|x| x * f).collect()).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn distribution_is_normalised_and_fi_bounded((pts, d) in window_strategy(30, 3)) {
        let a = bin_window(&pts, &StateSize::new(d).unwrap()).unwrap();
        let dist = state_probabilities(&a);
        let sum: f64 = dist.probabilities().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        for (p, q) in dist.probabilities().iter().zip(dist.amplitudes()) {
            prop_assert!(*p > 0.0 && *p <= 1.0);
            prop_assert_eq!(*q, p.sqrt());
        }
        let fi = fisher_index(&dist);
        let m = a.state_count();
        prop_assert!(fi > 0.0 && fi <= 8.0);
        prop_assert_eq!(fi == 8.0, m == 1);
        prop_assert!(fi >= fi_lower_bound(m) - 1e-12);
        let counts: Vec<usize> = a.counts().collect();
        prop_assert!((fi - oracle_fi(&counts)).abs() < 1e-12);
    }

    #[test]
    fn window_count_formula(t in 2usize..80, w in 2usize..20, inc in 1usize..20) {
        prop_assume!(inc <= w && w <= t);
        let rows: Vec<Vec<f64>> = (0..t).map(|i| vec![(i % 5) as f64]).collect();
        let s = sliding_fi(&matrix_from(&rows), &StateSize::new(vec![1.0]).unwrap(), WindowConfig::new(w, inc).unwrap()).unwrap();
        prop_assert_eq!(s.len(), (t - w) / inc + 1);
        prop_assert!(s.points.windows(2).all(|p| p[0].time_label < p[1].time_label));
        let last = s.points.last().unwrap();
        prop_assert!(last.window_end_index < t);
        prop_assert!(last.window_end_index + inc >= t);
    }

    #[test]
    fn slope_is_shift_invariant_and_odd(y in prop::collection::vec(0.0..8.0f64, 2..40), c in -5.0..5.0f64) {
        let base = classify_regime(&series_of(&y), None, 0.02).unwrap();
        let shifted: Vec<f64> = y.iter().map(|v| v + c).collect();
        let moved = classify_regime(&series_of(&shifted), None, 0.02).unwrap();
        prop_assert!((base.slope - moved.slope).abs() < 1e-12);
        if (base.slope.abs() - 0.02).abs() > 1e-9 {
            prop_assert_eq!(base.category, moved.category);
        }

        let negated: Vec<f64> = y.iter().map(|v| -v).collect();
        let neg = classify_regime(&series_of(&negated), None, 0.02).unwrap();
        prop_assert_eq!(neg.slope, -base.slope);
        let expected = match base.category {
            Regime::Declining => Regime::Increasing,
            Regime::Increasing => Regime::Declining,
            Regime::Stable => Regime::Stable,
        };
        prop_assert_eq!(neg.category, expected);
    }

    #[test]
    fn palindrome_has_zero_slope(y in prop::collection::vec(0.0..8.0f64, 1..40)) {
        let mut z = y.clone();
        z.extend(y.iter().rev());
        prop_assert_eq!(fi_slope(&series_of(&z), None).unwrap(), 0.0);
    }

    #[test]
    fn uniform_slope_matches_textbook(y in prop::collection::vec(-8.0..8.0f64, 2..60)) {
        let n = y.len() as f64;
        let mx = (n - 1.0) / 2.0;
        let my = y.iter().sum::<f64>() / n;
        let sxy: f64 = y.iter().enumerate().map(|(i, v)| (i as f64 - mx) * (v - my)).sum();
        let sxx: f64 = (0..y.len()).map(|i| (i as f64 - mx).powi(2)).sum();
        prop_assert!((ols_slope_uniform(&y) - sxy / sxx).abs() < 1e-10);
    }

    #[test]
    fn matrix_csv_round_trip(rows in prop::collection::vec(prop::collection::vec(-1e9..1e9f64, 3), 1..30)) {
        let m = matrix_from(&rows);
        let mut buf = Vec::new();
        write_matrix_csv(&m, "year", &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), m.clone());
        prop_assert_eq!(validate_matrix(m.to_raw()).unwrap(), m);
    }

    #[test]
    fn results_csv_round_trip(rows in prop::collection::vec(prop::collection::vec(-50.0..50.0f64, 2), 8..40)) {
        let m = matrix_from(&rows);
        let cfg = PipelineConfig {
            sos: SosChoice::Explicit(StateSize::new(vec![7.5, 12.0]).unwrap()),
            ..Default::default()
        };
        let out = run(&m, &cfg).unwrap();
        let mut buf = Vec::new();
        write_results_to(&out.document, "csv", &mut buf).unwrap();
        let back = read_results_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), out.series.len());
        for (r, p) in back.iter().zip(&out.series.points) {
            prop_assert!((r.fi - p.fi).abs() < 1e-12);
            prop_assert_eq!(r.m_states, p.m_states);
            prop_assert_eq!(r.time, p.time_label);
        }
    }
}

/// Enumerates every way to split `w` points into `m` non-empty ordered states.
fn compositions(w: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 1 {
        return vec![vec![w]];
    }
    (1..=w - (m - 1))
        .flat_map(|first| {
            compositions(w - first, m - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

#[test]
fn uniform_is_not_the_fi_minimiser() {
    // Exhaustive search over small windows: 8/m holds as a lower bound only
    // for m <= 2. A 1-2-1 split already undercuts the uniform value.
    for w in 1..=12 {
        for m in 1..=w {
            let min = compositions(w, m)
                .iter()
                .map(|c| oracle_fi(c))
                .fold(f64::INFINITY, f64::min);
            assert!(min >= fi_lower_bound(m) - 1e-12, "w={w} m={m}");
            if w % m == 0 {
                assert!(min <= 8.0 / m as f64 + 1e-12);
            }
            if m <= 2 && w % m == 0 {
                assert!((min - 8.0 / m as f64).abs() < 1e-12);
            }
        }
    }
    assert!(oracle_fi(&[1, 2, 1]) < 8.0 / 3.0);
    assert!((oracle_fi(&[1, 2, 1]) - fi_lower_bound(3)).abs() < 1e-12);
}
