use std::time::{Duration, Instant};

use flowsched::exact::{enumerate_optimal_with_budget, ExactOutcome, DEFAULT_BUDGET};
use flowsched::relax::build_sdp;
use flowsched::rounding::{randomize, RoundingReport, DEFAULT_SAMPLES};
use flowsched::sdp_solver::{solve, SdpSolution, SolveStatus, SolverOptions};
use flowsched::{Error, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::record::{Mode, RunRecord};
use crate::CliError;

/// Default size of the objective perturbation.
pub const DEFAULT_PERTURBATION: f64 = 1e-3;

/// Status reported when rounding meets the lower bound.
pub const CERTIFIED: &str = "OPTIMAL (bound matched)";

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub mode: Mode,
    pub solver: SolverOptions,
    pub samples: usize,
    pub budget: u64,
    /// Upper end of the uniform weight perturbation, if any.
    pub perturb: Option<f64>,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            mode: Mode::Sdp,
            solver: SolverOptions::default(),
            samples: DEFAULT_SAMPLES,
            budget: DEFAULT_BUDGET,
            perturb: None,
            seed: 0,
        }
    }
}

/// Weights shifted by i.i.d. uniform `[0, eps)` noise, plus the sum over
/// flights of the largest shift. Subtracting that sum from the perturbed
/// relaxation value gives a bound that is valid for the original weights.
pub fn perturb_weights(instance: &Instance, eps: f64, seed: u64) -> Result<(Instance, f64), CliError> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(CliError::Usage(format!("perturbation must be a nonnegative number, got {eps}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut slack = 0.0;
    let weights: Vec<Vec<f64>> = (0..instance.num_flights())
        .map(|i| {
            let shifts: Vec<f64> = (0..=instance.max_delay()).map(|_| eps * rng.random::<f64>()).collect();
            slack += shifts.iter().copied().fold(0.0, f64::max);
            shifts.iter().enumerate().map(|(j, s)| instance.weight(i, j) + s).collect()
        })
        .collect();
    Ok((instance.clone().with_weights(weights)?, slack))
}

/// Everything one pipeline run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: RunRecord,
    pub exact: Option<ExactOutcome>,
    pub sdp: Option<SdpSolution>,
    /// Lower bound valid for the unperturbed weights.
    pub bound: Option<f64>,
    pub rounding: Option<RoundingReport>,
    pub certified: bool,
    /// Whether the requested stage finished (OPTIMAL, or oracle completed).
    pub success: bool,
}

/// Runs one mode on one instance. Wall time covers the solver and rounding
/// calls only.
pub fn run(instance: &Instance, config: &SolveConfig, seed_column: Option<u64>) -> Result<Outcome, CliError> {
    let mut record = RunRecord {
        m: instance.num_sectors(),
        n: instance.num_flights(),
        horizon: instance.horizon(),
        d: instance.max_delay(),
        seed: seed_column,
        mode: config.mode,
        wall_s: 0.0,
        sdp_bound: None,
        oracle: None,
        best_rounded: None,
        status: String::new(),
    };
    let mut outcome = Outcome {
        record: record.clone(),
        exact: None,
        sdp: None,
        bound: None,
        rounding: None,
        certified: false,
        success: false,
    };

    if config.mode == Mode::Exact {
        let start = Instant::now();
        let result = enumerate_optimal_with_budget(instance, config.budget);
        record.wall_s = start.elapsed().as_secs_f64();
        match result? {
            ExactOutcome::Optimal(sol) => {
                record.oracle = Some(sol.objective);
                record.status = "OPTIMAL".into();
                outcome.exact = Some(ExactOutcome::Optimal(sol));
            }
            ExactOutcome::Infeasible => {
                record.status = "INFEASIBLE".into();
                outcome.exact = Some(ExactOutcome::Infeasible);
            }
        }
        outcome.success = true;
        outcome.record = record;
        return Ok(outcome);
    }

    let (relaxed, slack) = match config.perturb {
        Some(eps) => perturb_weights(instance, eps, config.seed)?,
        None => (instance.clone(), 0.0),
    };
    let problem = build_sdp(&relaxed);
    let mut elapsed = Duration::ZERO;
    let start = Instant::now();
    let sol = solve(&problem, &config.solver)?;
    elapsed += start.elapsed();

    let bound = sol.objective - slack;
    record.sdp_bound = Some(bound);
    record.status = sol.status.to_string();
    outcome.success = sol.status == SolveStatus::Optimal;
    outcome.bound = Some(bound);

    if config.mode == Mode::SdpRound && !sol.x.is_empty() {
        let start = Instant::now();
        let report = randomize(instance, &sol.x, &sol.big_x, config.samples, config.seed);
        elapsed += start.elapsed();
        match report {
            Ok(report) => {
                record.best_rounded = report.best_delay;
                outcome.certified = outcome.success && report.certifies(bound);
                if outcome.certified {
                    record.status = CERTIFIED.into();
                }
                outcome.rounding = Some(report);
            }
            Err(Error::Domain(msg)) if !outcome.success => {
                record.status = format!("{} ({msg})", sol.status);
            }
            Err(e) => return Err(e.into()),
        }
    }
    record.wall_s = elapsed.as_secs_f64();
    outcome.sdp = Some(sol);
    outcome.record = record;
    Ok(outcome)
}
