//! The 0/1 program and an exhaustive oracle for small instances.
//!
//! Variables `x_ij` (flight `i` delayed `j`) are laid out flight-major: column
//! `i * (d + 1) + j`. Capacity rows are ordered period-major, sector-minor, so
//! row `(sector k, period t)` comes before `(k', t + 1)` for every `k'`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};

/// Default cap on the number of delay vectors the oracle may enumerate.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Sector-period label of a capacity row (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapacityRow {
    pub sector: usize,
    pub period: usize,
}

/// Constraint data of the scheduling 0/1 program.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpData {
    pub rows: Vec<CapacityRow>,
    /// `rows.len() x n(d+1)` 0/1 occupancy coefficients.
    pub a_cap: DMatrix<f64>,
    pub b_cap: Vec<f64>,
    /// `n x n(d+1)`, row `i` sums flight `i`'s delay choices.
    pub a_assign: DMatrix<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MilpOptions {
    /// Keep sector-period rows no flight can occupy (all-zero rows).
    pub keep_zero_rows: bool,
}

pub fn build_milp(instance: &Instance) -> MilpData {
    build_milp_with(instance, MilpOptions::default())
}

pub fn build_milp_with(instance: &Instance, opts: MilpOptions) -> MilpData {
    let m = instance.num_sectors();
    let width = instance.width();
    let n = instance.num_flights();
    let p = instance.num_vars();

    // cell index (sector-major) -> variables occupying it
    let mut occupants: Vec<Vec<usize>> = vec![Vec::new(); m * width];
    for i in 0..n {
        for j in 0..=instance.max_delay() {
            for c in instance.cell_indices(i, j) {
                occupants[c].push(instance.var_index(i, j));
            }
        }
    }

    let mut rows = Vec::new();
    let mut row_vars = Vec::new();
    for t in 0..width {
        for k in 0..m {
            let vars = &occupants[k * width + t];
            if vars.is_empty() && !opts.keep_zero_rows {
                continue;
            }
            rows.push(CapacityRow { sector: k + 1, period: t + 1 });
            row_vars.push(vars);
        }
    }

    let mut a_cap = DMatrix::zeros(rows.len(), p);
    for (r, vars) in row_vars.iter().enumerate() {
        for &v in vars.iter() {
            a_cap[(r, v)] = 1.0;
        }
    }
    let b_cap = rows.iter().map(|r| instance.capacities()[r.sector - 1] as f64).collect();
    let mut a_assign = DMatrix::zeros(n, p);
    for i in 0..n {
        for j in 0..=instance.max_delay() {
            a_assign[(i, instance.var_index(i, j))] = 1.0;
        }
    }
    MilpData { rows, a_cap, b_cap, a_assign, c: instance.objective_vector() }
}

impl MilpData {
    /// `A_cap x <= b_cap` and `A_assign x = 1` for a 0/1 vector `x`.
    pub fn is_feasible(&self, x: &[f64]) -> bool {
        let cap_ok = (0..self.a_cap.nrows()).all(|r| {
            let lhs: f64 = self.a_cap.row(r).iter().zip(x).map(|(a, v)| a * v).sum();
            lhs <= self.b_cap[r] + 1e-9
        });
        let assign_ok = (0..self.a_assign.nrows()).all(|r| {
            let lhs: f64 = self.a_assign.row(r).iter().zip(x).map(|(a, v)| a * v).sum();
            (lhs - 1.0).abs() <= 1e-9
        });
        cap_ok && assign_ok
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// An optimal schedule found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub schedule: Schedule,
    /// Objective under the instance weights.
    pub objective: f64,
    pub total_delay: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExactOutcome {
    Optimal(ExactSolution),
    Infeasible,
}

impl ExactOutcome {
    pub fn solution(&self) -> Option<&ExactSolution> {
        match self {
            ExactOutcome::Optimal(s) => Some(s),
            ExactOutcome::Infeasible => None,
        }
    }
}

/// Number of delay vectors, `(d + 1)^n`, as a float to avoid overflow.
pub fn search_space(instance: &Instance) -> f64 {
    ((instance.max_delay() + 1) as f64).powi(instance.num_flights() as i32)
}

pub fn enumerate_optimal(instance: &Instance) -> Result<ExactOutcome> {
    enumerate_optimal_with_budget(instance, DEFAULT_BUDGET)
}

/// Depth-first search over delay vectors in lexicographic order.
///
/// Loads are updated incrementally as flights are placed; a branch is cut when
/// placing a flight would overload a cell or when its partial objective already
/// reaches the incumbent. Because the incumbent only changes on strict
/// improvement, the result is the lexicographically smallest optimum.
pub fn enumerate_optimal_with_budget(instance: &Instance, budget: u64) -> Result<ExactOutcome> {
    let required = search_space(instance);
    if required > budget as f64 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let n = instance.num_flights();
    let d = instance.max_delay();
    let cells: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| (0..=d).map(|j| instance.cell_indices(i, j).collect()).collect())
        .collect();
    let weights: Vec<Vec<f64>> = (0..n).map(|i| (0..=d).map(|j| instance.weight(i, j)).collect()).collect();
    let capacity: Vec<u32> = (0..instance.num_sectors() * instance.width())
        .map(|c| instance.capacities()[c / instance.width()])
        .collect();

    let mut search = Search {
        cells: &cells,
        weights: &weights,
        capacity: &capacity,
        load: vec![0; capacity.len()],
        current: Vec::with_capacity(n),
        best: None,
    };
    search.descend(0.0);

    Ok(match search.best {
        Some((objective, delays)) => {
            let schedule = Schedule::new(delays);
            ExactOutcome::Optimal(ExactSolution {
                total_delay: schedule.total_delay(),
                schedule,
                objective,
            })
        }
        None => ExactOutcome::Infeasible,
    })
}

struct Search<'a> {
    cells: &'a [Vec<Vec<usize>>],
    weights: &'a [Vec<f64>],
    capacity: &'a [u32],
    load: Vec<u32>,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    fn descend(&mut self, partial: f64) {
        let i = self.current.len();
        if i == self.cells.len() {
            if self.best.as_ref().is_none_or(|(b, _)| partial < *b) {
                self.best = Some((partial, self.current.clone()));
            }
            return;
        }
        for j in 0..self.cells[i].len() {
            let cost = partial + self.weights[i][j];
            if self.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
                continue;
            }
            let cells = &self.cells[i][j];
            if cells.iter().any(|&c| self.load[c] >= self.capacity[c]) {
                continue;
            }
            for &c in cells {
                self.load[c] += 1;
            }
            self.current.push(j);
            self.descend(cost);
            self.current.pop();
            for &c in cells {
                self.load[c] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{toy_instance, Route};

    #[rustfmt::skip]
    const TOY_A_CAP: [[u8; 4]; 20] = [
        [1,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,0],
        [0,1,0,0],[1,0,1,0],[0,0,0,1],[0,0,0,0],
        [0,0,0,0],[0,1,0,1],[0,0,0,0],[1,0,1,0],
        [0,0,0,0],[0,0,0,0],[0,0,0,0],[0,1,0,1],
        [0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0],
    ];

    #[test]
    fn toy_matrix_matches_printed_form() {
        let milp = build_milp_with(&toy_instance(), MilpOptions { keep_zero_rows: true });
        assert_eq!(milp.a_cap.shape(), (20, 4));
        for (r, row) in TOY_A_CAP.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(milp.a_cap[(r, c)], v as f64, "row {r} col {c}");
            }
        }
        assert_eq!(milp.c, vec![0.0, 1.0, 0.0, 1.0]);
        assert!(milp.b_cap.iter().all(|&b| b == 1.0));
    }

    #[test]
    fn zero_rows_pruned_by_default() {
        let milp = build_milp(&toy_instance());
        let nonzero = TOY_A_CAP.iter().filter(|r| r.iter().any(|&v| v == 1)).count();
        assert_eq!(milp.a_cap.nrows(), nonzero);
        for r in 0..milp.a_cap.nrows() {
            assert!(milp.a_cap.row(r).iter().any(|&v| v == 1.0));
        }
    }

    #[test]
    fn single_variable_degenerate() {
        let inst = Instance::new(1, vec![1], 1, 0, vec![Route::new(1, 1, [(1, 1)])]).unwrap();
        let milp = build_milp(&inst);
        assert_eq!(milp.a_assign, DMatrix::from_element(1, 1, 1.0));
        assert_eq!(milp.c, vec![0.0]);
    }

    #[test]
    fn toy_oracle_breaks_ties_lexicographically() {
        let sol = enumerate_optimal(&toy_instance()).unwrap();
        let sol = sol.solution().unwrap();
        assert_eq!(sol.schedule.delays, vec![0, 1]);
        assert_eq!(sol.total_delay, 1);
    }

    #[test]
    fn unconstrained_instance_is_on_time() {
        let inst = toy_instance();
        let relaxed = Instance::new(4, vec![2; 4], 4, 1, inst.routes().to_vec()).unwrap();
        let sol = enumerate_optimal(&relaxed).unwrap();
        assert_eq!(sol.solution().unwrap().schedule.delays, vec![0, 0]);
    }

    #[test]
    fn zero_capacity_is_infeasible() {
        let inst = toy_instance();
        let closed = Instance::new(4, vec![0; 4], 4, 1, inst.routes().to_vec()).unwrap();
        assert_eq!(enumerate_optimal(&closed).unwrap(), ExactOutcome::Infeasible);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_optimal_with_budget(&toy_instance(), 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 3, .. }));
    }
}
