//! Statistical and determinism properties of the Monte Carlo harness.

use netcontain::experiments::{aggregate, estimate_containment, sweep, ExperimentRecord};
use netcontain::grid::Params;
use netcontain::probability::occupancy_exact;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn within(record: &ExperimentRecord, truth: f64, sigmas: f64) -> bool {
    let sd = (truth * (1.0 - truth) / record.trials as f64).sqrt();
    (record.p_hat - truth).abs() <= sigmas * sd
}

#[test]
fn estimates_track_exact_values_across_seeds() {
    let params = Params::new(2, 1, 2).unwrap();
    let mut checks = 0;
    let mut misses = 0;
    for seed in 0..20u64 {
        let report = sweep(&params, &[2, 4, 8, 16], 10_000, seed, 0.1).unwrap();
        for row in &report.records {
            let exact = row.exact.expect("enumerable family");
            checks += 1;
            if !within(row, exact, 4.0) {
                misses += 1;
            }
        }
    }
    assert!(misses as f64 <= 0.01 * checks as f64, "{misses} of {checks} rows outside 4 sigma");
}

#[test]
fn estimate_matches_exact_at_scale() {
    let params = Params::new(2, 1, 2).unwrap();
    let r = estimate_containment(&params, 4, 100_000, 2025).unwrap();
    assert!((r.p_hat - 0.765625).abs() <= 0.0054, "{}", r.p_hat);
    assert!(r.ci_low <= r.p_hat && r.p_hat <= r.ci_high);
}

#[test]
fn sweep_rows_are_consistent_with_bounds() {
    let params = Params::new(2, 1, 2).unwrap();
    let report = sweep(&params, &[2, 4, 8, 16], 100_000, 77, 0.1).unwrap();
    assert_eq!(report.records.len(), 4);
    for row in &report.records {
        let upper = row.markov_upper.min(1.0);
        assert!(row.ci_high >= row.pz_lower && row.ci_low <= upper, "{row:?}");
    }
    for w in report.records.windows(2) {
        let slack = (w[0].ci_high - w[0].ci_low) + (w[1].ci_high - w[1].ci_low);
        assert!(w[1].p_hat >= w[0].p_hat - slack);
    }
}

#[test]
fn one_dimensional_sweep_matches_occupancy() {
    let params = Params::new(2, 2, 1).unwrap();
    let report = sweep(&params, &[4, 8, 16, 32], 20_000, 5, 0.1).unwrap();
    for row in &report.records {
        let truth = occupancy_exact(4, 4, row.n).unwrap();
        assert!((row.exact.unwrap() - truth).abs() < 1e-12);
        assert!(row.ci_low <= truth && truth <= row.ci_high || within(row, truth, 4.0), "{row:?}");
    }
}

#[test]
fn records_do_not_depend_on_thread_count() {
    let params = Params::new(2, 2, 2).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_containment(&params, 40, 3000, 11).unwrap())
    };
    let single = run(1);
    assert_eq!(single, run(3));
    assert_eq!(single, run(8));
}

#[test]
fn aggregation_ignores_completion_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let outcomes: Vec<(usize, bool)> = (0..1000).map(|i| (i, i % 7 == 0 || i % 5 == 1)).collect();
    let expected = aggregate(outcomes.clone());
    for _ in 0..10 {
        let mut shuffled = outcomes.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(aggregate(shuffled), expected);
    }
}

#[test]
fn sweep_annotates_threshold_rows() {
    let params = Params::new(2, 2, 2).unwrap();
    let report = sweep(&params, &[4, 8, 16, 25, 64], 200, 1, 0.1).unwrap();
    assert_eq!(report.sufficient_n, 25);
    assert!((report.necessary_n - 8.0).abs() < 1e-9);
    assert_eq!(report.nearest_sufficient_row, Some(3));
    assert_eq!(report.nearest_necessary_row, Some(1));
}
