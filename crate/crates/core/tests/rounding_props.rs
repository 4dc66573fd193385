mod common;

use common::{naive_optimum, small_instance};
use flowsched::model::{evaluate_schedule, toy_instance};
use flowsched::relax::build_sdp;
use flowsched::rounding::{make_sampler, project_sample, randomize, COVARIANCE_TOL};
use flowsched::sdp_solver::{solve, SolveStatus, SolverOptions};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn printed_toy() -> (Vec<f64>, DMatrix<f64>) {
    let x = vec![0.5; 4];
    let big_x = DMatrix::from_fn(4, 4, |i, j| if i == j { 0.50 } else { 0.24 });
    (x, big_x)
}

#[test]
fn printed_toy_covariance_is_reconstructed() {
    let (x, big_x) = printed_toy();
    let sampler = make_sampler(&x, &big_x, COVARIANCE_TOL).unwrap();
    let xv = DVector::from_vec(x);
    let target = &big_x - &xv * xv.transpose();
    assert!((sampler.covariance() - target).amax() <= 1e-6);
}

#[test]
fn sample_mean_converges() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let p = 4;
    let b = DMatrix::from_fn(p, p, |_, _| rng.random_range(-0.5..0.5));
    let cov = &b * b.transpose();
    let x: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..1.0)).collect();
    let xv = DVector::from_vec(x.clone());
    let big_x = &cov + &xv * xv.transpose();
    let sampler = make_sampler(&x, &big_x, COVARIANCE_TOL).unwrap();

    let draws = 100_000;
    let mut sum = DVector::zeros(p);
    let mut outer = DMatrix::zeros(p, p);
    for k in 0..draws {
        let u = sampler.sample(99, k);
        let c = &u - &xv;
        outer += &c * c.transpose();
        sum += u;
    }
    let mean = sum / draws as f64;
    for i in 0..p {
        let se = (cov[(i, i)] / draws as f64).sqrt();
        assert!((mean[i] - x[i]).abs() <= 3.0 * se, "component {i}: {} vs {}", mean[i], x[i]);
    }
    let empirical = outer / draws as f64;
    assert!((empirical - &cov).amax() <= 0.02 * cov.amax().max(1e-3));
}

/// Nearest one-hot row by exhaustive comparison; the first minimizer wins.
fn nearest_one_hot(row: &[f64]) -> usize {
    let dist = |j: usize| row.iter().enumerate().map(|(k, &v)| (v - if k == j { 1.0 } else { 0.0 }).powi(2)).sum::<f64>();
    let mut best = 0;
    for j in 1..row.len() {
        if dist(j) < dist(best) {
            best = j;
        }
    }
    best
}

#[test]
fn projection_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for trial in 0..10_000 {
        let width = 1 + trial % 5;
        // coarse values make exact ties common
        let row: Vec<f64> = if trial % 3 == 0 {
            (0..width).map(|_| rng.random_range(0..4) as f64 * 0.25).collect()
        } else {
            (0..width).map(|_| rng.random_range(-2.0..2.0)).collect()
        };
        let got = project_sample(&row, 1, width - 1).unwrap().delays[0];
        if got != nearest_one_hot(&row) {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
}

proptest! {
    #[test]
    fn projection_is_idempotent(n in 1usize..5, d in 0usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<f64> = (0..n * (d + 1)).map(|_| rng.random_range(-1.0..2.0)).collect();
        let once = project_sample(&u, n, d).unwrap();
        let twice = project_sample(&once.one_hot(d), n, d).unwrap();
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn rounding_is_deterministic_across_thread_counts() {
    let (x, big_x) = printed_toy();
    let toy = toy_instance();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| randomize(&toy, &x, &big_x, 200, 13).unwrap());
    let b = four.install(|| randomize(&toy, &x, &big_x, 200, 13).unwrap());
    let c = randomize(&toy, &x, &big_x, 200, 13).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let other = randomize(&toy, &x, &big_x, 200, 14).unwrap();
    assert_ne!(a.delay_histogram, other.delay_histogram);
}

#[test]
fn reports_are_consistent_and_sandwiched() {
    let opts = SolverOptions::default();
    let mut with_samples = 0;
    for k in 0..200 {
        let inst = small_instance(k);
        let Some((optimum, _)) = naive_optimum(&inst) else { continue };
        let sol = solve(&build_sdp(&inst), &opts).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        let report = randomize(&inst, &sol.x, &sol.big_x, 100, k).unwrap();
        assert_eq!(report.samples_drawn, 100);
        assert!(report.feasible_count <= report.samples_drawn);
        assert_eq!(report.delay_histogram.values().sum::<usize>(), report.feasible_count);
        assert_eq!(report.best_delay, report.delay_histogram.keys().next().copied());
        if let (Some(best), Some(delay)) = (&report.best, report.best_delay) {
            let eval = evaluate_schedule(&inst, best).unwrap();
            assert!(eval.feasible);
            assert_eq!(eval.total_delay, delay);
            assert!(delay as f64 >= optimum);
            assert!(delay as f64 >= (sol.objective - 1e-6).ceil());
            with_samples += 1;
        }
    }
    assert!(with_samples >= 40, "only {with_samples} instances produced a feasible sample");
}
