use super::*;
use proptest::prelude::*;

fn defaults() -> LinkModelParams {
    LinkModelParams::default()
}

#[test]
fn equal_depths_make_bulk_path_depth_independent() {
    let p = defaults();
    let (_, a) = path_log_amplitudes(&LinkScenario::level(0.3, 2.0).unwrap(), &p);
    let (_, b) = path_log_amplitudes(&LinkScenario::level(1.7, 2.0).unwrap(), &p);
    assert_eq!(a, b);
    assert!((a - (-2.0 / p.delta - 2.0f64.ln())).abs() < 1e-12);
}

#[test]
fn bulk_at_reference_distance() {
    let p = defaults();
    let (_, bulk) = path_log_amplitudes(&LinkScenario::level(0.5, p.r0).unwrap(), &p);
    assert_eq!(bulk, -p.r0 / p.delta);
}

#[test]
fn surface_path_wins_near_surface() {
    let p = LinkModelParams {
        delta: 0.0382,
        ..defaults()
    };
    let s = LinkScenario::level(0.5, 2.0).unwrap();
    let (surf, bulk) = path_log_amplitudes(&s, &p);
    // Direct evaluation of both closed forms.
    let surf_expected = -1.0 / 0.0851 - 2.0 / 9.0 - 0.5 * 2.0f64.ln();
    let bulk_expected = -2.0 / 0.0382 - 2.0f64.ln();
    assert!((surf - surf_expected).abs() < 1e-12);
    assert!((bulk - bulk_expected).abs() < 1e-12);
    assert!((2.0f64 / 0.0382 - 52.356).abs() < 1e-3);
    assert!(surf > bulk);
    assert!((two_path_gain(&s, &p) - DB_PER_NEPER * surf).abs() < 1e-12);
}

#[test]
fn gain_stays_finite_for_extreme_attenuation() {
    let p = defaults();
    let g = two_path_gain(&LinkScenario::level(50.0, 500.0).unwrap(), &p);
    assert!(g.is_finite());
}

#[test]
fn probability_examples() {
    let p = defaults();
    assert_eq!(link_probability(p.threshold_db, &p), 0.5);
    assert_eq!(link_probability(1e6, &p), 1.0);
    assert_eq!(link_probability(-1e6, &p), 0.0);
    // Oracle: composite Simpson integration of the standard normal density.
    let n = 20_000;
    let (a, b) = (-12.0, 1.0);
    let h = (b - a) / n as f64;
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(a) + pdf(b);
    for i in 1..n {
        s += pdf(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let phi1 = s * h / 3.0;
    let got = link_probability(p.threshold_db + p.sigma_fade_db, &p);
    assert!((got - phi1).abs() < 1e-10);
    assert!((got - 0.8413).abs() < 5e-5);
}

#[test]
fn single_cell_grid_matches_pipeline() {
    let p = defaults();
    let g = probability_grid(&[0.4], &[3.0], &p).unwrap();
    let s = LinkScenario::level(0.4, 3.0).unwrap();
    assert_eq!(g.p[0][0], link_probability(two_path_gain(&s, &p), &p));
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn default_grid_is_monotone() {
    let p = defaults();
    let depths = axis(0.1, 3.0, 30);
    let ranges = axis(0.5, 12.0, 24);
    let g = probability_grid(&depths, &ranges, &p).unwrap();
    for (i, row) in g.p.iter().enumerate() {
        for j in 0..row.len() {
            if j + 1 < row.len() {
                assert!(row[j + 1] <= row[j]);
            }
            if i + 1 < g.p.len() {
                assert!(g.p[i + 1][j] <= row[j]);
            }
        }
    }
}

#[test]
fn infinite_margin_is_certain() {
    let p = LinkModelParams {
        coupling_db: 1e9,
        ..defaults()
    };
    let g = probability_grid(&[0.1, 1.0, 3.0], &[0.5, 6.0, 12.0], &p).unwrap();
    assert!(g.p.iter().flatten().all(|&x| x == 1.0));
}

#[test]
fn grid_validation() {
    let p = defaults();
    assert!(probability_grid(&[], &[1.0], &p).is_err());
    assert!(probability_grid(&[1.0, 0.5], &[1.0], &p).is_err());
    assert!(probability_grid(&[0.0], &[1.0], &p).is_err());
    let bad = LinkModelParams {
        sigma_fade_db: 0.0,
        ..p
    };
    assert!(probability_grid(&[1.0], &[1.0], &bad).is_err());
    assert!(LinkScenario::new(0.0, 1.0, 1.0).is_err());
}

#[test]
fn crossing_range_interpolates() {
    let g = ProbabilityGrid {
        depths: vec![1.0],
        ranges: vec![1.0, 2.0, 3.0],
        p: vec![vec![0.9, 0.7, 0.3]],
    };
    assert!((g.crossing_range(0, 0.5).unwrap() - 2.5).abs() < 1e-12);
    assert_eq!(g.crossing_range(0, 0.1), None);
    assert_eq!(g.crossing_range(0, 0.95), Some(1.0));
}

#[test]
fn simulate_degenerate_probabilities() {
    for seed in [0, 1, 42, u64::MAX] {
        assert_eq!(simulate_trials(0.0, 10, seed).unwrap().successes, 0);
        assert_eq!(simulate_trials(1.0, 10, seed).unwrap().successes, 10);
    }
    assert!(simulate_trials(1.1, 10, 0).is_err());
    assert!(simulate_trials(0.5, 0, 0).is_err());
}

#[test]
fn simulate_concentrates() {
    // 6σ binomial bound: 6·sqrt(0.25/1e6) = 0.003; the required window of 0.002 is about 4σ.
    for seed in [1, 7, 42] {
        let o = simulate_trials(0.5, 1_000_000, seed).unwrap();
        assert!((o.estimate - 0.5).abs() < 0.002, "{seed}: {}", o.estimate);
    }
}

#[test]
fn simulate_is_pinned() {
    // Frozen output of ChaCha8 seeded with 42; changes here break recorded runs.
    let o = simulate_trials(0.5, 1000, 42).unwrap();
    assert_eq!(o, simulate_trials(0.5, 1000, 42).unwrap());
    assert_eq!(o.successes, PINNED_42);
}

const PINNED_42: u64 = 498;

#[test]
fn record_validation() {
    assert!(TrialRecord::new(0.5, 1.0, 0, 0).is_err());
    assert!(TrialRecord::new(0.5, 1.0, 3, 4).is_err());
    assert!(TrialRecord::new(-0.5, 1.0, 3, 1).is_err());
    assert_eq!(TrialRecord::new(0.5, 1.0, 4, 1).unwrap().success_rate(), 0.25);
}

proptest! {
    #[test]
    fn gain_monotone(d in 0.01f64..3.0, r in 0.05f64..20.0, dd in 0.0f64..1.0, dr in 0.0f64..5.0) {
        let p = defaults();
        let g = two_path_gain(&LinkScenario::level(d, r).unwrap(), &p);
        prop_assert!(two_path_gain(&LinkScenario::level(d, r + dr).unwrap(), &p) <= g);
        prop_assert!(two_path_gain(&LinkScenario::level(d + dd, r).unwrap(), &p) <= g);
    }

    #[test]
    fn probability_in_unit_interval(d in 0.01f64..3.0, r in 0.05f64..20.0, c in -200f64..200.0) {
        let p = LinkModelParams { coupling_db: c, ..defaults() };
        let x = link_probability(two_path_gain(&LinkScenario::level(d, r).unwrap(), &p), &p);
        prop_assert!((0.0..=1.0).contains(&x));
    }

    #[test]
    fn gain_continuous_at_crossover(d in 0.05f64..3.0, r in 0.05f64..20.0) {
        let p = defaults();
        let eps = 1e-9;
        let a = two_path_gain(&LinkScenario::level(d, r).unwrap(), &p);
        let b = two_path_gain(&LinkScenario::level(d, r + eps).unwrap(), &p);
        // Slope is bounded by the steeper path: 1/δ nepers per metre plus spreading.
        let bound = DB_PER_NEPER * (1.0 / p.delta + 1.0 / r + 1.0 / p.l_r) * eps * 1.01;
        prop_assert!((a - b).abs() <= bound);
    }
}
