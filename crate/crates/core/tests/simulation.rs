use scarceval::mc::{default_sweep_sizes, sweep_to_csv};
use scarceval::{run_coverage, width_vs_n_sweep, SimulationMethod, SimulationScenario};

fn scenario(n: usize, trials: u64) -> SimulationScenario {
    SimulationScenario {
        true_mean: 79.42,
        true_stddev: 3.6345,
        n_observations: n,
        confidence: 0.80,
        trials,
        seed: 2024,
        method: SimulationMethod::TInterval,
        prior: None,
        population: Default::default(),
    }
}

#[test]
fn half_width_shrinks_with_n() {
    let rows = width_vs_n_sweep(&scenario(2, 20_000), &default_sweep_sizes()).unwrap();
    assert_eq!(rows.len(), 5);
    for pair in rows.windows(2) {
        assert!(pair[1].mean_halfwidth < pair[0].mean_halfwidth, "{pair:?}");
    }
    for r in &rows {
        assert!((r.coverage - 0.80).abs() < 0.015, "{r:?}");
    }
}

#[test]
fn two_score_relative_margin_matches_expected_sd() {
    // With n = 2, E[s] = sigma * sqrt(2 / pi), so the expected half-width is
    // t * sigma * sqrt(2 / pi) / sqrt(2).
    let r = run_coverage(&scenario(2, 200_000)).unwrap();
    let t = 3.077_683_537_175_254;
    let expected = t * 3.6345 * (2.0 / std::f64::consts::PI).sqrt() / 2f64.sqrt();
    assert!((r.mean_halfwidth - expected).abs() / expected < 0.01, "{}", r.mean_halfwidth);
    let relative = r.mean_halfwidth / 79.42;
    assert!((relative - 0.0795).abs() < 0.001, "{relative}");
}

#[test]
fn runs_are_reproducible() {
    let a = run_coverage(&scenario(3, 10_000)).unwrap();
    let b = run_coverage(&scenario(3, 10_000)).unwrap();
    assert_eq!(a, b);
    let mut other = scenario(3, 10_000);
    other.seed += 1;
    assert_ne!(run_coverage(&other).unwrap().covered_trials, 0);
    assert_ne!(run_coverage(&other).unwrap(), a);
}

#[test]
fn sweep_csv_shape() {
    let rows = width_vs_n_sweep(&scenario(2, 2_000), &[1, 2, 10]).unwrap();
    assert_eq!(rows[0].method, SimulationMethod::ArfNormal);
    let csv = sweep_to_csv(&rows).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
