use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{domain, Result};

/// Sparse symmetric matrix stored by its upper triangle.
///
/// An entry `(i, j, v)` with `i < j` stands for both `A[i][j]` and `A[j][i]`.
/// Entries are kept sorted and free of explicit zeros, so two matrices with the
/// same values compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, entries: Vec::new() }
    }

    /// Sums duplicate positions; `(j, i)` is folded onto `(i, j)`.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, v) in entries {
            let key = if i <= j { (i, j) } else { (j, i) };
            *acc.entry(key).or_insert(0.0) += v;
        }
        let entries = acc.into_iter().filter(|(_, v)| *v != 0.0).map(|((i, j), v)| (i, j, v)).collect();
        SymMatrix { dim, entries }
    }

    /// Fails with a domain error when `a` is not square or not symmetric.
    pub fn from_dense(a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return domain(format!("matrix is {}x{}, expected square", a.nrows(), a.ncols()));
        }
        let scale = a.amax().max(1.0);
        let n = a.nrows();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                if (a[(i, j)] - a[(j, i)]).abs() > 1e-12 * scale {
                    return domain(format!("matrix is not symmetric at ({i}, {j})"));
                }
                if a[(i, j)] != 0.0 {
                    entries.push((i, j, 0.5 * (a[(i, j)] + a[(j, i)])));
                }
            }
        }
        Ok(SymMatrix { dim: n, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map(|k| self.entries[k].2)
            .unwrap_or(0.0)
    }

    /// Trace inner product `<A, Z>` with a symmetric dense `Z`.
    pub fn dot(&self, z: &DMatrix<f64>) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v * z[(i, i)] } else { v * (z[(i, j)] + z[(j, i)]) })
            .sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.dim, self.dim);
        self.add_to(&mut a, 1.0);
        a
    }

    /// `target += scale * A`.
    pub fn add_to(&self, target: &mut DMatrix<f64>, scale: f64) {
        for &(i, j, v) in &self.entries {
            target[(i, j)] += scale * v;
            if i != j {
                target[(j, i)] += scale * v;
            }
        }
    }

    pub fn scaled(&self, alpha: f64) -> SymMatrix {
        SymMatrix::from_entries(self.dim, self.entries.iter().map(|&(i, j, v)| (i, j, alpha * v)))
    }

    /// Every stored position, both triangles: `(r, c, A[r][c])`.
    pub(crate) fn full_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(2 * self.entries.len());
        for &(i, j, v) in &self.entries {
            out.push((i, j, v));
            if i != j {
                out.push((j, i, v));
            }
        }
        out
    }
}

/// A trace constraint `<matrix, Z>` compared with `rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub matrix: SymMatrix,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(matrix: SymMatrix, rhs: f64) -> Self {
        Constraint { matrix, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Optimize `<cost, Z> + offset` over symmetric `Z ⪰ 0` subject to
/// `<A_k, Z> = b_k` and `<G_l, Z> <= h_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub dim: usize,
    pub sense: Sense,
    pub cost: SymMatrix,
    pub offset: f64,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
    /// Known value of `Tr(Z)` on the feasible set; seeds the starting point.
    pub trace_hint: Option<f64>,
}

impl SdpProblem {
    pub fn new(dim: usize, sense: Sense, cost: SymMatrix) -> Self {
        SdpProblem {
            dim,
            sense,
            cost,
            offset: 0.0,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            trace_hint: None,
        }
    }

    pub fn add_equality(&mut self, matrix: SymMatrix, rhs: f64) {
        self.equalities.push(Constraint::new(matrix, rhs));
    }

    pub fn add_inequality(&mut self, matrix: SymMatrix, rhs: f64) {
        self.inequalities.push(Constraint::new(matrix, rhs));
    }

    /// Objective of a candidate `Z`, offset included.
    pub fn objective_at(&self, z: &DMatrix<f64>) -> f64 {
        self.cost.dot(z) + self.offset
    }

    /// Largest scaled violation over all constraints at `z`:
    /// `|<A,Z> - b| / (1 + |b|)` for equalities, `max(0, <G,Z> - h) / (1 + |h|)` otherwise.
    pub fn max_violation(&self, z: &DMatrix<f64>) -> f64 {
        let eq = self
            .equalities
            .iter()
            .map(|c| (c.matrix.dot(z) - c.rhs).abs() / (1.0 + c.rhs.abs()));
        let ineq = self
            .inequalities
            .iter()
            .map(|c| (c.matrix.dot(z) - c.rhs).max(0.0) / (1.0 + c.rhs.abs()));
        eq.chain(ineq).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return domain("matrix dimension must be at least 1");
        }
        let mats = std::iter::once((&self.cost, 0.0))
            .chain(self.equalities.iter().map(|c| (&c.matrix, c.rhs)))
            .chain(self.inequalities.iter().map(|c| (&c.matrix, c.rhs)));
        for (m, rhs) in mats {
            if m.dim() != self.dim {
                return domain(format!("constraint matrix has dimension {}, expected {}", m.dim(), self.dim));
            }
            if m.entries().iter().any(|&(i, j, v)| i > j || j >= self.dim || !v.is_finite()) {
                return domain("constraint matrix has an invalid entry");
            }
            if !rhs.is_finite() {
                return domain("constraint right-hand side is not finite");
            }
        }
        if !self.offset.is_finite() {
            return domain("objective offset is not finite");
        }
        Ok(())
    }
}
