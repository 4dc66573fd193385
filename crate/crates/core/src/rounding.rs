//! Randomized rounding of a relaxed solution.
//!
//! Samples `u ~ N(x, X - x x')`, projects each onto one-hot rows and keeps the
//! best capacity-feasible schedule. Sample `k` draws from its own ChaCha
//! stream `k` under the caller's seed, so results do not depend on how samples
//! are spread over threads.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::model::{evaluate_schedule, Instance, Schedule};

/// Default tolerance on negative eigenvalues of `X - x x'`.
pub const COVARIANCE_TOL: f64 = 1e-6;

/// Number of samples drawn by default.
pub const DEFAULT_SAMPLES: usize = 100;

/// Gaussian with a factored covariance, `cov = factor · factor'`.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
}

impl GaussianSampler {
    pub fn new(x: &[f64], big_x: &DMatrix<f64>, tolerance: f64) -> Result<Self> {
        make_sampler(x, big_x, tolerance)
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        &self.factor * self.factor.transpose()
    }

    /// Draw number `index` of the stream seeded by `seed`.
    pub fn sample(&self, seed: u64, index: u64) -> DVector<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let g = DVector::from_iterator(self.factor.ncols(), (0..self.factor.ncols()).map(|_| StandardNormal.sample(&mut rng)));
        &self.mean + &self.factor * g
    }
}

/// Factors `X - x x'`, clamping eigenvalues in `[-tolerance, 0)` to zero.
pub fn make_sampler(x: &[f64], big_x: &DMatrix<f64>, tolerance: f64) -> Result<GaussianSampler> {
    let p = x.len();
    if big_x.nrows() != p || big_x.ncols() != p {
        return domain(format!("X is {}x{}, expected {p}x{p}", big_x.nrows(), big_x.ncols()));
    }
    let scale = big_x.amax().max(1.0);
    if (big_x - big_x.transpose()).amax() > 1e-9 * scale {
        return domain("X must be symmetric");
    }
    let mean = DVector::from_column_slice(x);
    let cov = big_x - &mean * mean.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(cov);
    let lam_min = eig.eigenvalues.min();
    if lam_min < -tolerance {
        return domain(format!("X - x x' has eigenvalue {lam_min:.3e} below -{tolerance:.1e}"));
    }
    let keep: Vec<usize> = (0..p).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    let mut factor = DMatrix::zeros(p, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        let root = eig.eigenvalues[k].sqrt();
        factor.set_column(c, &(eig.eigenvectors.column(k) * root));
    }
    Ok(GaussianSampler { mean, factor })
}

/// Nearest one-hot schedule in Euclidean distance: per flight, the largest
/// entry wins, ties going to the smaller delay.
pub fn project_sample(u: &[f64], n: usize, max_delay: usize) -> Result<Schedule> {
    let width = max_delay + 1;
    if u.len() != n * width {
        return domain(format!("sample has length {}, expected {}", u.len(), n * width));
    }
    let delays = u
        .chunks(width)
        .map(|row| {
            row.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bj, bv), (j, &v)| if v > bv { (j, v) } else { (bj, bv) })
                .0
        })
        .collect();
    Ok(Schedule::new(delays))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoundingReport {
    pub samples_drawn: usize,
    pub feasible_count: usize,
    pub best: Option<Schedule>,
    pub best_delay: Option<u64>,
    /// Total delay -> number of feasible samples with that delay.
    pub delay_histogram: BTreeMap<u64, usize>,
}

impl RoundingReport {
    /// Whether the best rounded delay meets `ceil(bound - 1e-6)`, which
    /// certifies it as globally optimal.
    pub fn certifies(&self, bound: f64) -> bool {
        self.best_delay.is_some_and(|b| b as f64 <= (bound - 1e-6).ceil())
    }

    /// Histogram as CSV with header `delay,count`.
    pub fn write_histogram_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "delay,count")?;
        for (delay, count) in &self.delay_histogram {
            writeln!(out, "{delay},{count}")?;
        }
        Ok(())
    }
}

/// Draws `num_samples` rounded schedules; sample 0 is the mean `x` itself.
pub fn randomize(
    instance: &Instance,
    x: &[f64],
    big_x: &DMatrix<f64>,
    num_samples: usize,
    seed: u64,
) -> Result<RoundingReport> {
    if num_samples == 0 {
        return domain("at least one sample required");
    }
    let n = instance.num_flights();
    let d = instance.max_delay();
    let sampler = make_sampler(x, big_x, COVARIANCE_TOL)?;
    let outcomes: Vec<Option<(u64, Schedule)>> = (0..num_samples as u64)
        .into_par_iter()
        .map(|k| -> Result<Option<(u64, Schedule)>> {
            let u = if k == 0 { sampler.mean().clone() } else { sampler.sample(seed, k) };
            let sched = project_sample(u.as_slice(), n, d)?;
            let eval = evaluate_schedule(instance, &sched)?;
            Ok(eval.feasible.then_some((eval.total_delay, sched)))
        })
        .collect::<Result<_>>()?;

    let mut report = RoundingReport { samples_drawn: num_samples, ..Default::default() };
    for (delay, sched) in outcomes.into_iter().flatten() {
        report.feasible_count += 1;
        *report.delay_histogram.entry(delay).or_insert(0) += 1;
        if report.best_delay.is_none_or(|b| delay < b) {
            report.best_delay = Some(delay);
            report.best = Some(sched);
        }
    }
    Ok(report)
}
