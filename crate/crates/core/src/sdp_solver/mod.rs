//! Dense primal-dual interior-point method for single-block SDPs.
//!
//! Problems have one PSD matrix variable `Z` plus one nonnegative slack per
//! inequality row. Internally everything is in minimization form:
//!
//! ```text
//! primal  min <C,Z>          s.t. <A_k,Z> = b_k,  <G_l,Z> + s_l = h_l,  Z ⪰ 0, s >= 0
//! dual    max b'y + h'w      s.t. C - Σ y_k A_k - Σ w_l G_l = S ⪰ 0,   t = -w >= 0
//! ```
//!
//! Each iteration takes an infeasible-start Mehrotra predictor-corrector step
//! along the HKM direction (`dZ = K - Z dS S⁻¹`, symmetrized). Equality and
//! inequality rows share one Schur complement system; the slack pairs
//! contribute `s_l / t_l` to its diagonal.

mod problem;

pub use problem::{Constraint, SdpProblem, Sense, SymMatrix};

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Result};
use crate::linalg::{frobenius_dot, max_nonneg_step, max_psd_step, min_eigenvalue, symmetrized};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative duality gap at which to stop.
    pub gap_tol: f64,
    /// Scaled primal and dual residual at which to stop.
    pub feas_tol: f64,
    pub max_iters: usize,
    /// Fraction of the step to the cone boundary actually taken.
    pub step_fraction: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { gap_tol: 1e-7, feas_tol: 1e-7, max_iters: 100, step_fraction: 0.98 }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0 && self.feas_tol > 0.0) {
            return domain("solver tolerances must be positive");
        }
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return domain("step_fraction must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// No convergence within the iteration limit or the method stalled.
    MaxIters,
    /// Primal residuals stalled while the dual objective diverged.
    InfeasibleSuspected,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "OPTIMAL",
            SolveStatus::MaxIters => "MAX_ITERS",
            SolveStatus::InfeasibleSuspected => "INFEASIBLE_SUSPECTED",
        })
    }
}

/// `[X, x; x', 1]` split of a lifted matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifted {
    pub x: Vec<f64>,
    pub big_x: DMatrix<f64>,
    /// `max(0, -λ_min(X - x x'))`.
    pub schur_residual: f64,
}

/// Splits `Z` into its leading block and normalized last column.
pub fn extract(z: &DMatrix<f64>) -> Result<Lifted> {
    let n = z.nrows();
    if n == 0 || z.ncols() != n {
        return domain("extract needs a nonempty square matrix");
    }
    let scale = z.amax().max(1.0);
    if (0..n).any(|i| (0..i).any(|j| (z[(i, j)] - z[(j, i)]).abs() > 1e-9 * scale)) {
        return domain("extract needs a symmetric matrix");
    }
    let p = n - 1;
    let corner = z[(p, p)];
    if corner <= 0.0 {
        return domain(format!("corner entry {corner} must be positive"));
    }
    let x: Vec<f64> = (0..p).map(|i| z[(i, p)] / corner).collect();
    let big_x = z.view((0, 0), (p, p)).into_owned();
    let xv = DVector::from_column_slice(&x);
    let schur = &big_x - &xv * xv.transpose();
    let schur_residual = (-min_eigenvalue(&schur)).max(0.0);
    Ok(Lifted { x, big_x, schur_residual })
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub z: DMatrix<f64>,
    /// Last column of `Z` over its corner entry, rows `0..dim-1`.
    pub x: Vec<f64>,
    /// Leading `(dim-1) x (dim-1)` block.
    pub big_x: DMatrix<f64>,
    /// Objective in the problem's own sense, offset included.
    pub objective: f64,
    pub dual_objective: f64,
    /// Multipliers of the equality rows, in the problem's own sense.
    pub equality_duals: Vec<f64>,
    /// Nonnegative multipliers of the inequality rows.
    pub inequality_duals: Vec<f64>,
    /// Dual slack matrix `S` of the minimization form.
    pub dual_slack: DMatrix<f64>,
    pub status: SolveStatus,
    pub iterations: usize,
    pub metrics: Metrics,
}

impl SdpSolution {
    pub fn trace(&self) -> f64 {
        self.z.trace()
    }
}

/// Convergence measures of one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    /// Max scaled equality residual `|<A,Z> - b| / (1 + |b|)`.
    pub eq_residual: f64,
    /// Max scaled inequality excess `max(0, <G,Z> - h) / (1 + |h|)`.
    pub ineq_residual: f64,
    /// `(‖C - A*y - S‖_F + ‖w + t‖) / (1 + ‖C‖_F)`.
    pub dual_residual: f64,
    /// `|primal - dual| / (1 + |primal|)`.
    pub rel_gap: f64,
    /// `(<Z,S> + s't) / (1 + |primal|)`.
    pub rel_complementarity: f64,
}

impl Metrics {
    fn merit(&self) -> f64 {
        self.eq_residual + self.ineq_residual + self.dual_residual + self.rel_gap
    }

    fn converged(&self, opts: &SolverOptions) -> bool {
        self.eq_residual <= opts.feas_tol
            && self.ineq_residual <= opts.feas_tol
            && self.dual_residual <= opts.feas_tol
            && self.rel_gap <= opts.gap_tol
            && self.rel_complementarity <= opts.gap_tol
    }
}

#[derive(Clone)]
struct Iterate {
    z: DMatrix<f64>,
    s: Vec<f64>,
    y: Vec<f64>,
    dual: DMatrix<f64>,
    t: Vec<f64>,
}

struct Evaluated {
    metrics: Metrics,
    pobj: f64,
    dobj: f64,
    rp: Vec<f64>,
    rd: DMatrix<f64>,
    rt: Vec<f64>,
}

struct Direction {
    z: DMatrix<f64>,
    s: Vec<f64>,
    y: Vec<f64>,
    dual: DMatrix<f64>,
    t: Vec<f64>,
}

/// Immutable problem data in minimization form.
struct Data {
    n: usize,
    k_eq: usize,
    rows: Vec<Vec<(usize, usize, f64)>>,
    sparse: Vec<SymMatrix>,
    b: Vec<f64>,
    c: DMatrix<f64>,
    c_norm: f64,
    sign: f64,
    offset: f64,
}

impl Data {
    fn num_ineq(&self) -> usize {
        self.rows.len() - self.k_eq
    }

    /// `Tr(A_i X)` for a possibly nonsymmetric `X`.
    fn apply_row(&self, i: usize, x: &DMatrix<f64>) -> f64 {
        self.rows[i].iter().map(|&(r, c, a)| a * x[(c, r)]).sum()
    }

    fn adjoint(&self, y: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (a, &yi) in self.sparse.iter().zip(y) {
            if yi != 0.0 {
                a.add_to(&mut out, yi);
            }
        }
        out
    }

    fn evaluate(&self, it: &Iterate) -> Evaluated {
        let m = self.rows.len();
        let mut eq_residual: f64 = 0.0;
        let mut ineq_residual: f64 = 0.0;
        let mut rp = vec![0.0; m];
        for i in 0..m {
            let ax = self.sparse[i].dot(&it.z);
            let scale = 1.0 + self.b[i].abs();
            if i < self.k_eq {
                rp[i] = self.b[i] - ax;
                eq_residual = eq_residual.max(rp[i].abs() / scale);
            } else {
                rp[i] = self.b[i] - ax - it.s[i - self.k_eq];
                ineq_residual = ineq_residual.max((ax - self.b[i]).max(0.0) / scale);
            }
        }
        let rd = &self.c - self.adjoint(&it.y) - &it.dual;
        let rt: Vec<f64> = (0..self.num_ineq()).map(|l| -it.y[self.k_eq + l] - it.t[l]).collect();
        let rt_norm = rt.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dual_residual = (rd.norm() + rt_norm) / (1.0 + self.c_norm);

        let pobj = frobenius_dot(&self.c, &it.z);
        let dobj: f64 = self.b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
        let reported = self.sign * pobj + self.offset;
        let comp = frobenius_dot(&it.z, &it.dual) + it.s.iter().zip(&it.t).map(|(a, b)| a * b).sum::<f64>();
        let metrics = Metrics {
            eq_residual,
            ineq_residual,
            dual_residual,
            rel_gap: (pobj - dobj).abs() / (1.0 + reported.abs()),
            rel_complementarity: comp.abs() / (1.0 + reported.abs()),
        };
        Evaluated { metrics, pobj, dobj, rp, rd, rt }
    }

    /// Schur complement `M_ij = Tr(A_i Z A_j S⁻¹)` plus `s/t` on inequality rows.
    fn schur(&self, z: &DMatrix<f64>, w: &DMatrix<f64>, s: &[f64], t: &[f64]) -> DMatrix<f64> {
        let m = self.rows.len();
        let n = self.n;
        let mut schur = DMatrix::zeros(m, m);
        let mut p = DMatrix::zeros(n, n);
        for j in 0..m {
            // P = Z A_j W as a sum of outer products of Z's columns and W's rows
            p.fill(0.0);
            for &(a, b, v) in &self.rows[j] {
                let zc = z.column(a);
                let wr = w.row(b);
                for (col, &wv) in wr.iter().enumerate() {
                    if wv != 0.0 {
                        let f = v * wv;
                        for (row, &zv) in zc.iter().enumerate() {
                            p[(row, col)] += f * zv;
                        }
                    }
                }
            }
            for i in j..m {
                schur[(i, j)] = self.apply_row(i, &p);
            }
        }
        for j in 0..m {
            for i in 0..j {
                schur[(i, j)] = schur[(j, i)];
            }
        }
        for l in 0..self.num_ineq() {
            schur[(self.k_eq + l, self.k_eq + l)] += s[l] / t[l];
        }
        schur
    }
}

enum Decomposition {
    Chol(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

/// Factored Schur matrix; solves are refined against the unregularized matrix.
struct Factor {
    matrix: DMatrix<f64>,
    decomposition: Decomposition,
}

const REFINEMENT_STEPS: usize = 3;

impl Factor {
    fn new(matrix: DMatrix<f64>) -> Option<Factor> {
        let decomposition = Self::decompose(matrix.clone())?;
        Some(Factor { matrix, decomposition })
    }

    fn decompose(mut m: DMatrix<f64>) -> Option<Decomposition> {
        let diag_max = m.diagonal().amax().max(1e-300);
        if let Some(c) = m.clone().cholesky() {
            return Some(Decomposition::Chol(c));
        }
        let mut delta = 1e-14 * diag_max;
        for _ in 0..6 {
            for i in 0..m.nrows() {
                m[(i, i)] += delta;
            }
            if let Some(c) = m.clone().cholesky() {
                return Some(Decomposition::Chol(c));
            }
            delta *= 100.0;
        }
        let lu = m.lu();
        lu.is_invertible().then_some(Decomposition::Lu(lu))
    }

    fn raw_solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        match &self.decomposition {
            Decomposition::Chol(c) => Some(c.solve(rhs)),
            Decomposition::Lu(l) => l.solve(rhs),
        }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut x = self.raw_solve(rhs)?;
        let mut res_norm = (rhs - &self.matrix * &x).norm();
        for _ in 0..REFINEMENT_STEPS {
            if res_norm <= 1e-15 * rhs.norm() {
                break;
            }
            let r = rhs - &self.matrix * &x;
            let candidate = &x + self.raw_solve(&r)?;
            let cand_norm = (rhs - &self.matrix * &candidate).norm();
            if !(cand_norm < res_norm) {
                break;
            }
            x = candidate;
            res_norm = cand_norm;
        }
        Some(x)
    }
}

/// Converged iterates are recentered until every eigenvalue of `Z S` (and
/// every `s_l t_l`) is within this fraction of `μ`. On a non-singleton optimal
/// face this pulls the solution toward the face's analytic center.
const CENTRALITY_TARGET: f64 = 0.05;
const MAX_RECENTER: usize = 30;

/// `max |λ_i(Z S) / μ - 1|` over the matrix block and the slack pairs.
fn centrality(it: &Iterate, nu: f64) -> f64 {
    let mu = (frobenius_dot(&it.z, &it.dual) + dot(&it.s, &it.t)) / nu;
    let Some(chol) = it.z.clone().cholesky() else {
        return f64::INFINITY;
    };
    let l = chol.l();
    let scaled = l.transpose() * &it.dual * &l;
    let eig = nalgebra::SymmetricEigen::new(symmetrized(&scaled)).eigenvalues;
    eig.iter()
        .copied()
        .chain(it.s.iter().zip(&it.t).map(|(s, t)| s * t))
        .map(|v| (v / mu - 1.0).abs())
        .fold(0.0, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `problem` from a fixed starting point; identical inputs give identical output.
pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    opts.validate()?;
    let n = problem.dim;
    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let sparse: Vec<SymMatrix> = problem
        .equalities
        .iter()
        .chain(&problem.inequalities)
        .map(|c| c.matrix.clone())
        .collect();
    let c = problem.cost.to_dense() * sign;
    let data = Data {
        n,
        k_eq: problem.equalities.len(),
        rows: sparse.iter().map(|a| a.full_entries()).collect(),
        b: problem.equalities.iter().chain(&problem.inequalities).map(|c| c.rhs).collect(),
        c_norm: c.norm(),
        c,
        sparse,
        sign,
        offset: problem.offset,
    };
    let l_ineq = data.num_ineq();
    let nu = (n + l_ineq) as f64;

    let tau = problem.trace_hint.map_or(1.0, |t| (t / n as f64).max(1e-3));
    let eta = 1.0 + data.c_norm / (n as f64).sqrt();
    let mut it = Iterate {
        z: DMatrix::identity(n, n) * tau,
        s: problem.inequalities.iter().map(|c| c.rhs.abs().max(1.0)).collect(),
        y: vec![0.0; data.rows.len()],
        dual: DMatrix::identity(n, n) * eta,
        t: vec![eta; l_ineq],
    };

    let mut best: Option<(f64, Iterate)> = None;
    let mut converged_at: Option<Iterate> = None;
    let mut status = SolveStatus::MaxIters;
    let mut iterations = 0;
    let mut stalled = 0;
    let mut recentering = 0;
    let mut primal_history: Vec<f64> = Vec::new();

    for iter in 0..=opts.max_iters {
        let ev = data.evaluate(&it);
        let merit = ev.metrics.merit();
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            best = Some((merit, it.clone()));
        }
        if ev.metrics.converged(opts) {
            converged_at = Some(it.clone());
            if recentering >= MAX_RECENTER || iter == opts.max_iters || centrality(&it, nu) <= CENTRALITY_TARGET {
                break;
            }
            recentering += 1;
        } else if converged_at.is_some() {
            // recentering lost convergence; keep the converged point
            break;
        }
        let primal_res = ev.metrics.eq_residual.max(ev.metrics.ineq_residual);
        primal_history.push(primal_res);
        if iter >= 15 && primal_res > opts.feas_tol && ev.dobj > 1e8 * (1.0 + ev.pobj.abs()) {
            let earlier = primal_history[iter - 10];
            if primal_res > 0.5 * earlier {
                status = SolveStatus::InfeasibleSuspected;
                break;
            }
        }
        if iter == opts.max_iters {
            break;
        }
        iterations = iter + 1;

        let Some(step) = newton_step(&data, &it, &ev, nu, opts, converged_at.is_some()) else {
            break;
        };
        let (dir, alpha_p, alpha_d) = step;
        if alpha_p < 1e-10 && alpha_d < 1e-10 {
            stalled += 1;
            if stalled >= 3 {
                break;
            }
        } else {
            stalled = 0;
        }
        it.z += &dir.z * alpha_p;
        it.z = symmetrized(&it.z);
        for (v, d) in it.s.iter_mut().zip(&dir.s) {
            *v += alpha_p * d;
        }
        for (v, d) in it.y.iter_mut().zip(&dir.y) {
            *v += alpha_d * d;
        }
        it.dual += &dir.dual * alpha_d;
        it.dual = symmetrized(&it.dual);
        for (v, d) in it.t.iter_mut().zip(&dir.t) {
            *v += alpha_d * d;
        }
    }

    if let Some(c) = converged_at {
        status = SolveStatus::Optimal;
        best = Some((0.0, c));
    }
    let (_, final_it) = best.expect("at least one iterate evaluated");
    let ev = data.evaluate(&final_it);
    if status == SolveStatus::Optimal && !ev.metrics.converged(opts) {
        status = SolveStatus::MaxIters;
    }
    let lifted = extract(&final_it.z).ok();
    let (x, big_x) = match lifted {
        Some(l) => (l.x, l.big_x),
        None => (Vec::new(), DMatrix::zeros(0, 0)),
    };
    Ok(SdpSolution {
        objective: sign * ev.pobj + data.offset,
        dual_objective: sign * ev.dobj + data.offset,
        equality_duals: final_it.y[..data.k_eq].iter().map(|v| sign * v).collect(),
        inequality_duals: final_it.t.clone(),
        x,
        big_x,
        dual_slack: final_it.dual.clone(),
        z: final_it.z,
        status,
        iterations,
        metrics: ev.metrics,
    })
}

/// Predictor-corrector direction and the primal/dual step lengths.
fn newton_step(
    data: &Data,
    it: &Iterate,
    ev: &Evaluated,
    nu: f64,
    opts: &SolverOptions,
    centering: bool,
) -> Option<(Direction, f64, f64)> {
    let w = symmetrized(&it.dual.clone().cholesky()?.inverse());
    let schur = data.schur(&it.z, &w, &it.s, &it.t);
    let factor = Factor::new(schur)?;
    let z_rd_w = &it.z * &ev.rd * &w;
    let mu = (frobenius_dot(&it.z, &it.dual) + dot(&it.s, &it.t)) / nu;

    let direction = |k: &DMatrix<f64>, ks: &[f64]| -> Option<Direction> {
        let kk = k - &z_rd_w;
        let m = data.rows.len();
        let rhs = DVector::from_iterator(
            m,
            (0..m).map(|i| {
                let mut r = ev.rp[i] - data.apply_row(i, &kk);
                if i >= data.k_eq {
                    let l = i - data.k_eq;
                    r -= (ks[l] - it.s[l] * ev.rt[l]) / it.t[l];
                }
                r
            }),
        );
        let dy = factor.solve(&rhs)?;
        let dy: Vec<f64> = dy.iter().copied().collect();
        let d_dual = &ev.rd - data.adjoint(&dy);
        let dz = symmetrized(&(k - &it.z * &d_dual * &w));
        let dt: Vec<f64> = (0..it.t.len()).map(|l| ev.rt[l] - dy[data.k_eq + l]).collect();
        let ds: Vec<f64> = (0..it.s.len()).map(|l| (ks[l] - it.s[l] * dt[l]) / it.t[l]).collect();
        if dz.iter().chain(d_dual.iter()).chain(&dy).any(|v| !v.is_finite()) {
            return None;
        }
        Some(Direction { z: dz, s: ds, y: dy, dual: d_dual, t: dt })
    };
    let steps = |d: &Direction| -> Option<(f64, f64)> {
        let ap = max_psd_step(&it.z, &d.z)?.min(max_nonneg_step(&it.s, &d.s));
        let ad = max_psd_step(&it.dual, &d.dual)?.min(max_nonneg_step(&it.t, &d.t));
        Some((ap, ad))
    };

    let (k, ks) = if centering {
        let k = &w * mu - &it.z;
        let ks: Vec<f64> = it.s.iter().zip(&it.t).map(|(s, t)| mu - s * t).collect();
        (k, ks)
    } else {
        // predictor: pure Newton step toward complementarity
        let ks_aff: Vec<f64> = it.s.iter().zip(&it.t).map(|(s, t)| -s * t).collect();
        let aff = direction(&(-&it.z), &ks_aff)?;
        let (ap, ad) = steps(&aff)?;
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let z_next = &it.z + &aff.z * ap;
        let s_next = &it.dual + &aff.dual * ad;
        let comp_aff = frobenius_dot(&z_next, &s_next)
            + (0..it.s.len())
                .map(|l| (it.s[l] + ap * aff.s[l]) * (it.t[l] + ad * aff.t[l]))
                .sum::<f64>();
        let sigma = ((comp_aff / nu) / mu).clamp(0.0, 1.0).powi(3);

        // corrector with the second-order term
        let k = &w * (sigma * mu) - &it.z - &aff.z * &aff.dual * &w;
        let ks: Vec<f64> = (0..it.s.len())
            .map(|l| sigma * mu - it.s[l] * it.t[l] - aff.s[l] * aff.t[l])
            .collect();
        (k, ks)
    };
    let dir = direction(&k, &ks)?;
    let (ap, ad) = steps(&dir)?;
    let alpha_p = (opts.step_fraction * ap).min(1.0);
    let alpha_d = (opts.step_fraction * ad).min(1.0);
    Some((dir, alpha_p, alpha_d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, i: usize, j: usize) -> SymMatrix {
        SymMatrix::from_entries(n, [(i, j, if i == j { 1.0 } else { 0.5 })])
    }

    #[test]
    fn forced_diagonal() {
        let mut p = SdpProblem::new(2, Sense::Minimize, SymMatrix::from_entries(2, [(0, 0, 1.0), (1, 1, 1.0)]));
        p.add_equality(unit(2, 0, 0), 1.0);
        p.add_equality(unit(2, 1, 1), 1.0);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-6);
        assert!((&sol.z - DMatrix::<f64>::identity(2, 2)).amax() < 1e-6);
    }

    #[test]
    fn maximize_with_inequality() {
        // max Z01 s.t. Z00 <= 1, Z11 <= 4  ->  2 at Z01 = sqrt(Z00 Z11)
        let mut p = SdpProblem::new(2, Sense::Maximize, unit(2, 0, 1));
        p.add_inequality(unit(2, 0, 0), 1.0);
        p.add_inequality(unit(2, 1, 1), 4.0);
        let sol = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-6, "{}", sol.objective);
        assert!((sol.dual_objective - 2.0).abs() < 1e-6);
        assert!(sol.inequality_duals.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn invalid_options_rejected() {
        let p = SdpProblem::new(1, Sense::Minimize, unit(1, 0, 0));
        let bad = SolverOptions { step_fraction: 1.0, ..Default::default() };
        assert!(solve(&p, &bad).is_err());
        let bad = SolverOptions { gap_tol: 0.0, ..Default::default() };
        assert!(solve(&p, &bad).is_err());
    }

    #[test]
    fn out_of_range_entry_rejected() {
        let mut p = SdpProblem::new(2, Sense::Minimize, unit(2, 0, 0));
        p.add_equality(SymMatrix::from_entries(2, [(0, 2, 1.0)]), 1.0);
        assert!(solve(&p, &SolverOptions::default()).is_err());
    }

    #[test]
    fn extract_rank_one() {
        let v = DVector::from_vec(vec![1.0, 0.0, 1.0, 1.0]);
        let z = &v * v.transpose();
        let l = extract(&z).unwrap();
        assert_eq!(l.x, vec![1.0, 0.0, 1.0]);
        assert!(l.schur_residual < 1e-12);
        assert!(extract(&DMatrix::zeros(2, 2)).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 1.0]);
        assert!(extract(&asym).is_err());
    }
}
