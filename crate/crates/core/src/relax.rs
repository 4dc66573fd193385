//! Lifting of the scheduling program into semidefinite form.
//!
//! The lifted matrix is `Z = [X, x; x', 1]` with `x = vec` of the one-hot
//! schedule (flight-major) and `X` standing in for `x x'`. Two routes lead to
//! the same relaxation:
//!
//! - [`build_sdp`] writes the scheduling relaxation directly;
//! - [`build_qcqp`] states the problem as a nonconvex QCQP, after which
//!   [`bidual`] produces the `(X, x)` relaxation and [`lagrangian_dual`] the
//!   `(γ, λ)` dual whose value both bound the optimum from below.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{domain, Result};
use crate::exact::build_milp;
use crate::linalg::{min_eigenvalue, sym_norm};
use crate::model::Instance;
use crate::sdp_solver::{SdpProblem, SdpSolution, Sense, SymMatrix};

pub use crate::sdp_solver::Constraint;

/// Relative eigenvalue cutoff for the pseudo-inverse and the PSD test.
pub const EIGEN_CUTOFF: f64 = 1e-9;
/// Residual tolerance for `q ∈ range(P)`, relative to `1 + ‖q‖`.
pub const RANGE_TOL: f64 = 1e-8;

/// The scheduling relaxation over `Z ∈ S^(p+1)`, `p = n(d+1)`.
///
/// Rows, in order: `Z_NN = 1`; `Z_ll - Z_lN = 0` for each variable; one
/// assignment row per flight; one capacity inequality per occupied
/// sector-period.
pub fn build_sdp(instance: &Instance) -> SdpProblem {
    let p = instance.num_vars();
    let dim = p + 1;
    let last = p;
    let milp = build_milp(instance);
    let cost = SymMatrix::from_entries(dim, milp.c.iter().enumerate().map(|(l, &c)| (l, last, 0.5 * c)));
    let mut sdp = SdpProblem::new(dim, Sense::Minimize, cost);
    sdp.trace_hint = Some(instance.num_flights() as f64 + 1.0);

    sdp.add_equality(SymMatrix::from_entries(dim, [(last, last, 1.0)]), 1.0);
    for l in 0..p {
        sdp.add_equality(SymMatrix::from_entries(dim, [(l, l, 1.0), (l, last, -0.5)]), 0.0);
    }
    for i in 0..instance.num_flights() {
        let row = (0..=instance.max_delay()).map(|j| (instance.var_index(i, j), last, 0.5));
        sdp.add_equality(SymMatrix::from_entries(dim, row), 1.0);
    }
    for r in 0..milp.a_cap.nrows() {
        let row = (0..p).filter(|&l| milp.a_cap[(r, l)] != 0.0).map(|l| (l, last, 0.5 * milp.a_cap[(r, l)]));
        sdp.add_inequality(SymMatrix::from_entries(dim, row), milp.b_cap[r]);
    }
    sdp
}

/// `x' P x + q' x + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub p: DMatrix<f64>,
    pub q: DVector<f64>,
    pub r: f64,
}

impl Quadratic {
    pub fn linear(q: DVector<f64>, r: f64) -> Self {
        let n = q.len();
        Quadratic { p: DMatrix::zeros(n, n), q, r }
    }

    pub fn eval(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.p * x)[(0, 0)] + self.q.dot(x) + self.r
    }

    /// `Tr(X P) + q'x + r`.
    pub fn eval_lifted(&self, x: &DVector<f64>, big_x: &DMatrix<f64>) -> f64 {
        self.p.component_mul(big_x).sum() + self.q.dot(x) + self.r
    }

    fn negated(&self) -> Quadratic {
        Quadratic { p: -&self.p, q: -&self.q, r: -self.r }
    }

    /// `[P, q/2; q'/2, 0]`.
    fn block(&self) -> SymMatrix {
        let n = self.q.len();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = self.p[(i, j)];
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
            if self.q[i] != 0.0 {
                entries.push((i, n, 0.5 * self.q[i]));
            }
        }
        SymMatrix::from_entries(n + 1, entries)
    }
}

/// Minimize `objective(x)` subject to `constraints[i](x) <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QcqpProblem {
    pub dim: usize,
    pub objective: Quadratic,
    pub constraints: Vec<Quadratic>,
}

impl QcqpProblem {
    pub fn new(objective: Quadratic, constraints: Vec<Quadratic>) -> Result<Self> {
        let dim = objective.q.len();
        for (k, f) in std::iter::once(&objective).chain(&constraints).enumerate() {
            if f.q.len() != dim || f.p.nrows() != dim || f.p.ncols() != dim {
                return domain(format!("quadratic {k} has inconsistent dimensions"));
            }
            let scale = f.p.amax().max(1.0);
            if (&f.p - f.p.transpose()).amax() > 1e-12 * scale {
                return domain(format!("quadratic {k} has a nonsymmetric P"));
            }
        }
        Ok(QcqpProblem { dim, objective, constraints })
    }

    /// `P(λ)`, `q(λ)` and `r(λ)` of the Lagrangian.
    pub fn lagrangian(&self, lambda: &[f64]) -> Quadratic {
        let mut agg = self.objective.clone();
        for (f, &l) in self.constraints.iter().zip(lambda) {
            if l != 0.0 {
                agg.p += &f.p * l;
                agg.q += &f.q * l;
                agg.r += f.r * l;
            }
        }
        agg
    }
}

/// The scheduling problem as a QCQP over `x ∈ R^p`.
///
/// Constraint order: for each variable the pair `x² - x <= 0`, `x - x² <= 0`;
/// then for each flight the pair `Σ_j x_ij - 1 <= 0`, `1 - Σ_j x_ij <= 0`;
/// then one capacity row per occupied sector-period.
pub fn build_qcqp(instance: &Instance) -> QcqpProblem {
    let p = instance.num_vars();
    let milp = build_milp(instance);
    let objective = Quadratic::linear(DVector::from_vec(milp.c.clone()), 0.0);
    let mut constraints = Vec::new();
    for l in 0..p {
        let mut pm = DMatrix::zeros(p, p);
        pm[(l, l)] = 1.0;
        let mut q = DVector::zeros(p);
        q[l] = -1.0;
        let f = Quadratic { p: pm, q, r: 0.0 };
        let g = f.negated();
        constraints.push(f);
        constraints.push(g);
    }
    for i in 0..instance.num_flights() {
        let q = DVector::from_iterator(p, milp.a_assign.row(i).iter().copied());
        let f = Quadratic::linear(q, -1.0);
        let g = f.negated();
        constraints.push(f);
        constraints.push(g);
    }
    for r in 0..milp.a_cap.nrows() {
        let q = DVector::from_iterator(p, milp.a_cap.row(r).iter().copied());
        constraints.push(Quadratic::linear(q, -milp.b_cap[r]));
    }
    QcqpProblem { dim: p, objective, constraints }
}

/// Dual function `g(λ) = inf_x L(x, λ)`; `-∞` when the Lagrangian is unbounded below.
///
/// `P(λ)` counts as PSD when its smallest eigenvalue is at least
/// `-EIGEN_CUTOFF · max(1, ‖P‖)`; eigenvalues within that band are treated as
/// zero by the pseudo-inverse.
pub fn dual_function_value(qcqp: &QcqpProblem, lambda: &[f64]) -> Result<f64> {
    if lambda.len() != qcqp.constraints.len() {
        return domain(format!("expected {} multipliers, got {}", qcqp.constraints.len(), lambda.len()));
    }
    if lambda.iter().any(|&l| l < 0.0 || !l.is_finite()) {
        return domain("multipliers must be finite and nonnegative");
    }
    let agg = qcqp.lagrangian(lambda);
    if qcqp.dim == 0 {
        return Ok(agg.r);
    }
    let cutoff = EIGEN_CUTOFF * sym_norm(&agg.p).max(1.0);
    let eig = SymmetricEigen::new(agg.p.clone());
    if eig.eigenvalues.min() < -cutoff {
        return Ok(f64::NEG_INFINITY);
    }
    // pseudo-inverse applied through the eigenbasis
    let coords = eig.eigenvectors.transpose() * &agg.q;
    let mut quad = 0.0;
    let mut outside = 0.0;
    for (k, &c) in coords.iter().enumerate() {
        let ev = eig.eigenvalues[k];
        if ev.abs() <= cutoff {
            outside += c * c;
        } else {
            quad += c * c / ev;
        }
    }
    if outside.sqrt() > RANGE_TOL * (1.0 + agg.q.norm()) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(agg.r - 0.25 * quad)
}

/// Pairs `(i, j)`, `i < j`, whose constraints are exact negations of each other.
fn equality_pairs(qcqp: &QcqpProblem) -> Vec<Option<usize>> {
    let mc = qcqp.constraints.len();
    let mut partner = vec![None; mc];
    for i in 0..mc {
        if partner[i].is_some() {
            continue;
        }
        let neg = qcqp.constraints[i].negated();
        if let Some(j) = (i + 1..mc).find(|&j| partner[j].is_none() && qcqp.constraints[j] == neg) {
            partner[i] = Some(j);
            partner[j] = Some(i);
        }
    }
    partner
}

/// The `(X, x)` relaxation: `Tr(X P_i) + q_i'x + r_i <= 0` over `[X, x; x', 1] ⪰ 0`.
///
/// A constraint whose exact negation also appears is emitted once as an
/// equality at the position of its first member; `Y_NN = 1` comes first.
pub fn bidual(qcqp: &QcqpProblem) -> SdpProblem {
    let p = qcqp.dim;
    let dim = p + 1;
    let mut sdp = SdpProblem::new(dim, Sense::Minimize, qcqp.objective.block());
    sdp.offset = qcqp.objective.r;
    sdp.add_equality(SymMatrix::from_entries(dim, [(p, p, 1.0)]), 1.0);
    let partner = equality_pairs(qcqp);
    for (i, f) in qcqp.constraints.iter().enumerate() {
        match partner[i] {
            Some(j) if j > i => sdp.add_equality(f.block(), -f.r),
            Some(_) => {}
            None => sdp.add_inequality(f.block(), -f.r),
        }
    }
    sdp
}

/// QCQP multipliers recovered from a solved [`bidual`].
///
/// Inequality rows map to their duals; for a merged pair with equality dual
/// `y`, the first member gets `max(-y, 0)` and the second `max(y, 0)`.
pub fn bidual_multipliers(qcqp: &QcqpProblem, sol: &SdpSolution) -> Vec<f64> {
    let partner = equality_pairs(qcqp);
    let mut lambda = vec![0.0; qcqp.constraints.len()];
    let mut eq = 1;
    let mut ineq = 0;
    for i in 0..lambda.len() {
        match partner[i] {
            Some(j) if j > i => {
                let y = sol.equality_duals[eq];
                lambda[i] = (-y).max(0.0);
                lambda[j] = y.max(0.0);
                eq += 1;
            }
            Some(_) => {}
            None => {
                lambda[i] = sol.inequality_duals[ineq].max(0.0);
                ineq += 1;
            }
        }
    }
    lambda
}

/// The Lagrangian dual: maximize `γ + Σ λ_i r_i + r_0` subject to
/// `[P(λ), q(λ)/2; q(λ)'/2, -γ] ⪰ 0`, `λ >= 0`.
///
/// Stated over `Z = [W, *; *, Λ]` of size `p + 1 + mc`: the leading block `W`
/// is tied entrywise to the LMI, so `γ = -W_pp`, and the trailing diagonal
/// holds `λ`. Entries outside these positions are unconstrained and free of
/// cost, which leaves the optimal value unchanged since any `Z ⪰ 0` has
/// `W ⪰ 0` and a nonnegative diagonal.
pub fn lagrangian_dual(qcqp: &QcqpProblem) -> SdpProblem {
    let p = qcqp.dim;
    let mc = qcqp.constraints.len();
    let dim = p + 1 + mc;
    let lam = |i: usize| p + 1 + i;

    let cost = SymMatrix::from_entries(
        dim,
        std::iter::once((p, p, -1.0)).chain(qcqp.constraints.iter().enumerate().map(|(i, f)| (lam(i), lam(i), f.r))),
    );
    let mut sdp = SdpProblem::new(dim, Sense::Maximize, cost);
    sdp.offset = qcqp.objective.r;

    for a in 0..p {
        for b in a..p {
            let coef = if a == b { 1.0 } else { 0.5 };
            let entries = std::iter::once((a, b, coef)).chain(
                qcqp.constraints
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.p[(a, b)] != 0.0)
                    .map(|(i, f)| (lam(i), lam(i), -f.p[(a, b)])),
            );
            sdp.add_equality(SymMatrix::from_entries(dim, entries), qcqp.objective.p[(a, b)]);
        }
    }
    for a in 0..p {
        let entries = std::iter::once((a, p, 0.5)).chain(
            qcqp.constraints
                .iter()
                .enumerate()
                .filter(|(_, f)| f.q[a] != 0.0)
                .map(|(i, f)| (lam(i), lam(i), -0.5 * f.q[a])),
        );
        sdp.add_equality(SymMatrix::from_entries(dim, entries), 0.5 * qcqp.objective.q[a]);
    }
    sdp
}

/// `(γ, λ)` read off a solved [`lagrangian_dual`].
pub fn lagrangian_multipliers(qcqp: &QcqpProblem, sol: &SdpSolution) -> (f64, Vec<f64>) {
    let p = qcqp.dim;
    let gamma = -sol.z[(p, p)];
    let lambda = (0..qcqp.constraints.len()).map(|i| sol.z[(p + 1 + i, p + 1 + i)].max(0.0)).collect();
    (gamma, lambda)
}

/// Whether `[X, x; x', 1] ⪰ 0` within `tol`.
pub fn is_lift_psd(x: &[f64], big_x: &DMatrix<f64>, tol: f64) -> bool {
    let p = x.len();
    let mut z = DMatrix::zeros(p + 1, p + 1);
    z.view_mut((0, 0), (p, p)).copy_from(big_x);
    for (i, &v) in x.iter().enumerate() {
        z[(i, p)] = v;
        z[(p, i)] = v;
    }
    z[(p, p)] = 1.0;
    min_eigenvalue(&z) >= -tol
}

/// Rank-one lift `[x; 1][x; 1]'` of a point.
pub fn rank_one_lift(x: &[f64]) -> DMatrix<f64> {
    let v = DVector::from_iterator(x.len() + 1, x.iter().copied().chain(std::iter::once(1.0)));
    &v * v.transpose()
}
