mod common;

use common::{naive_optimum, small_instance};
use flowsched::model::toy_instance;
use flowsched::relax::build_sdp;
use flowsched::sdp_solver::{extract, solve, Sense, SdpProblem, SdpSolution, SolveStatus, SolverOptions, SymMatrix};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn min_eig(a: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(a.clone()).eigenvalues.min()
}

fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(a.clone()).eigenvalues.amax()
}

/// Checks the OPTIMAL contract by recomputing every quantity from `z`.
fn assert_contract(problem: &SdpProblem, sol: &SdpSolution, opts: &SolverOptions) {
    assert_eq!(sol.status, SolveStatus::Optimal);
    let z = &sol.z;
    assert!(min_eig(z) >= -1e-8 * (1.0 + spectral_norm(z)));
    for c in &problem.equalities {
        assert!((c.matrix.dot(z) - c.rhs).abs() <= opts.feas_tol * (1.0 + c.rhs.abs()));
    }
    for c in &problem.inequalities {
        assert!(c.matrix.dot(z) <= c.rhs + opts.feas_tol * (1.0 + c.rhs.abs()));
    }
    assert!((problem.objective_at(z) - sol.objective).abs() <= 1e-9 * (1.0 + sol.objective.abs()));
    assert!((sol.objective - sol.dual_objective).abs() <= opts.gap_tol * (1.0 + sol.objective.abs()));
    let comp = z.component_mul(&sol.dual_slack).sum();
    assert!(comp.abs() <= 10.0 * opts.gap_tol * (1.0 + sol.objective.abs()), "<Z, S> = {comp}");
    assert!(min_eig(&sol.dual_slack) >= -1e-8 * (1.0 + spectral_norm(&sol.dual_slack)));
    assert!(sol.inequality_duals.iter().all(|&t| t >= 0.0));
}

#[test]
fn toy_relaxation_matches_printed_solution() {
    let opts = SolverOptions::default();
    let problem = build_sdp(&toy_instance());
    let sol = solve(&problem, &opts).unwrap();
    assert_contract(&problem, &sol, &opts);
    assert!((sol.objective - 1.0).abs() < 1e-4);
    for i in 0..4 {
        assert!((sol.x[i] - 0.5).abs() < 2e-2);
        for j in 0..4 {
            let printed = if i == j { 0.50 } else { 0.24 };
            assert!((sol.big_x[(i, j)] - printed).abs() < 2e-2, "X[{i}][{j}] = {}", sol.big_x[(i, j)]);
        }
    }
    assert!((sol.trace() - 3.0).abs() < 1e-6);
}

#[test]
fn relaxation_is_sound_on_random_instances() {
    let opts = SolverOptions::default();
    let mut optimal = 0;
    for k in 0..200 {
        let inst = small_instance(k);
        let problem = build_sdp(&inst);
        let sol = solve(&problem, &opts).unwrap();
        let oracle = naive_optimum(&inst);
        if sol.status == SolveStatus::Optimal {
            assert_contract(&problem, &sol, &opts);
            assert!((sol.trace() - (inst.num_flights() as f64 + 1.0)).abs() <= 1e-6);
            optimal += 1;
        }
        if let (Some((value, _)), SolveStatus::Optimal) = (&oracle, sol.status) {
            assert!(sol.objective <= value + 1e-5, "instance {k}: bound {} above optimum {value}", sol.objective);
        }
        if oracle.is_some() {
            assert_eq!(sol.status, SolveStatus::Optimal, "instance {k} is feasible but the relaxation did not converge");
        }
    }
    assert!(optimal >= 40);
}

#[test]
fn solve_is_deterministic() {
    let problem = build_sdp(&small_instance(17));
    let a = solve(&problem, &SolverOptions::default()).unwrap();
    let b = solve(&problem, &SolverOptions::default()).unwrap();
    assert_eq!(a.z, b.z);
    assert_eq!(a.objective, b.objective);
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn cost_scaling_scales_objective() {
    let opts = SolverOptions::default();
    for k in [0u64, 5, 12, 31] {
        let base = build_sdp(&small_instance(k));
        let reference = solve(&base, &opts).unwrap();
        if reference.status != SolveStatus::Optimal {
            continue;
        }
        for alpha in [0.25, 3.0, 40.0] {
            let mut scaled = base.clone();
            scaled.cost = base.cost.scaled(alpha);
            let sol = solve(&scaled, &opts).unwrap();
            assert_contract(&scaled, &sol, &opts);
            let expected = alpha * reference.objective;
            assert!((sol.objective - expected).abs() <= 1e-6 * (1.0 + expected.abs()), "k {k} alpha {alpha}");
        }
    }
}

#[test]
fn maximize_sense_negates_minimize() {
    let opts = SolverOptions::default();
    let problem = build_sdp(&toy_instance());
    let mut flipped = problem.clone();
    flipped.sense = Sense::Maximize;
    flipped.cost = problem.cost.scaled(-1.0);
    let a = solve(&problem, &opts).unwrap();
    let b = solve(&flipped, &opts).unwrap();
    assert_eq!(b.status, SolveStatus::Optimal);
    assert!((a.objective + b.objective).abs() < 1e-6);
}

#[test]
fn contradictory_constraints_are_not_optimal() {
    let mut problem = SdpProblem::new(2, Sense::Minimize, SymMatrix::from_entries(2, [(0, 0, 1.0), (1, 1, 1.0)]));
    problem.add_equality(SymMatrix::from_entries(2, [(0, 0, 1.0)]), 1.0);
    problem.add_inequality(SymMatrix::from_entries(2, [(0, 0, 1.0)]), 0.5);
    let sol = solve(&problem, &SolverOptions::default()).unwrap();
    assert_ne!(sol.status, SolveStatus::Optimal);
}

#[test]
fn nonsymmetric_input_rejected() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 1.0]);
    assert!(SymMatrix::from_dense(&a).is_err());
}

#[test]
fn schur_complement_of_random_psd_is_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..200 {
        let n = 2 + trial % 9;
        let rank = 1 + trial % n;
        let b = DMatrix::from_fn(n, rank, |_, _| rng.random_range(-1.0..1.0));
        let mut z = &b * b.transpose();
        let corner = z[(n - 1, n - 1)];
        if corner < 1e-3 {
            continue;
        }
        z /= corner;
        let lifted = extract(&z).unwrap();
        assert!(lifted.schur_residual <= 1e-10, "trial {trial}: {}", lifted.schur_residual);
        for i in 0..n - 1 {
            assert_eq!(lifted.x[i], z[(i, n - 1)] / z[(n - 1, n - 1)]);
        }
    }
}
