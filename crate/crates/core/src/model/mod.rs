//! Airspace and flight data model.
//!
//! Sector ids, departures and periods are 1-based in the data (and in every
//! public report), matching the instance file format. Internally a cell
//! `(sector, period)` is addressed 0-based as `sector_idx * width + period_idx`,
//! where `width = T + d` is the extended horizon: a delayed flight may leave
//! the nominal window, so loads are tracked up to period `T + d`.

mod generate;
mod io;

pub use generate::{generate_instance, GeneratorParams};
pub use io::{read_instance, write_instance};

use crate::error::{domain, Result};

/// One sector traversal: the flight sits in `sector` for `dwell` periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub sector: usize,
    pub dwell: usize,
}

/// A flight's fixed path through the airspace and its scheduled departure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub flight_id: u32,
    /// First occupied period when undelayed (1-based).
    pub departure: usize,
    pub legs: Vec<Leg>,
}

impl Route {
    pub fn new(flight_id: u32, departure: usize, legs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Route {
            flight_id,
            departure,
            legs: legs.into_iter().map(|(sector, dwell)| Leg { sector, dwell }).collect(),
        }
    }

    pub fn total_dwell(&self) -> usize {
        self.legs.iter().map(|l| l.dwell).sum()
    }

    /// Checks the route against an airspace of `m` sectors and horizon `horizon`.
    pub fn validate(&self, m: usize, horizon: usize) -> Result<()> {
        if self.legs.is_empty() {
            return domain(format!("flight {}: route has no legs", self.flight_id));
        }
        for leg in &self.legs {
            if leg.dwell == 0 {
                return domain(format!("flight {}: dwell must be at least 1", self.flight_id));
            }
            if leg.sector == 0 || leg.sector > m {
                return domain(format!(
                    "flight {}: sector {} outside [1..{m}]",
                    self.flight_id, leg.sector
                ));
            }
        }
        if self.departure == 0 {
            return domain(format!("flight {}: departure must be at least 1", self.flight_id));
        }
        if self.departure + self.total_dwell() - 1 > horizon {
            return domain(format!(
                "flight {}: undelayed route ends after horizon {horizon}",
                self.flight_id
            ));
        }
        Ok(())
    }

    /// Occupied `(sector_idx, period_idx)` pairs, 0-based, when departing `delay` periods late.
    pub fn cells(&self, delay: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let start = self.departure - 1 + delay;
        self.legs
            .iter()
            .scan(start, |t, leg| {
                let first = *t;
                *t += leg.dwell;
                Some((leg.sector - 1, first..first + leg.dwell))
            })
            .flat_map(|(k, periods)| periods.map(move |t| (k, t)))
    }
}

/// Binary sector-by-period occupancy over the extended horizon `T + d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyMatrix {
    sectors: usize,
    periods: usize,
    cells: Vec<bool>,
}

impl OccupancyMatrix {
    pub fn sectors(&self) -> usize {
        self.sectors
    }

    pub fn periods(&self) -> usize {
        self.periods
    }

    /// Entry for a 1-based `(sector, period)`; out-of-range queries read as 0.
    pub fn get(&self, sector: usize, period: usize) -> bool {
        if sector == 0 || period == 0 || sector > self.sectors || period > self.periods {
            return false;
        }
        self.cells[(sector - 1) * self.periods + period - 1]
    }

    /// All 1-based `(sector, period)` entries equal to one, sector-major.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(idx, _)| (idx / self.periods + 1, idx % self.periods + 1))
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Builds the occupancy matrix of `route` departing `delay` periods late.
pub fn expanded_occupancy(
    route: &Route,
    delay: usize,
    m: usize,
    horizon: usize,
    max_delay: usize,
) -> Result<OccupancyMatrix> {
    if delay > max_delay {
        return domain(format!("delay {delay} exceeds maximum delay {max_delay}"));
    }
    route.validate(m, horizon)?;
    let periods = horizon + max_delay;
    let mut cells = vec![false; m * periods];
    for (k, t) in route.cells(delay) {
        cells[k * periods + t] = true;
    }
    Ok(OccupancyMatrix { sectors: m, periods, cells })
}

/// One delay per flight, in periods.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    pub delays: Vec<usize>,
}

impl Schedule {
    pub fn new(delays: Vec<usize>) -> Self {
        Schedule { delays }
    }

    pub fn on_time(n: usize) -> Self {
        Schedule { delays: vec![0; n] }
    }

    /// Flight-major one-hot encoding: entry `i * (d + 1) + j` is 1 iff flight `i` is delayed `j`.
    pub fn one_hot(&self, max_delay: usize) -> Vec<f64> {
        let width = max_delay + 1;
        let mut x = vec![0.0; self.delays.len() * width];
        for (i, &j) in self.delays.iter().enumerate() {
            x[i * width + j] = 1.0;
        }
        x
    }

    pub fn total_delay(&self) -> u64 {
        self.delays.iter().map(|&j| j as u64).sum()
    }
}

/// A breached capacity: `load` flights in `sector` during `period` (both 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub sector: usize,
    pub period: usize,
    pub load: u32,
    pub capacity: u32,
}

/// Outcome of checking a schedule against an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub feasible: bool,
    /// Sum of delays, in periods.
    pub total_delay: u64,
    /// Objective under the instance weights; equals `total_delay` with default weights.
    pub weighted_delay: f64,
    pub violations: Vec<Violation>,
}

/// The full problem statement: airspace, horizon, flights and objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    m: usize,
    capacities: Vec<u32>,
    horizon: usize,
    max_delay: usize,
    routes: Vec<Route>,
    weights: Option<Vec<Vec<f64>>>,
}

impl Instance {
    pub fn new(
        m: usize,
        capacities: Vec<u32>,
        horizon: usize,
        max_delay: usize,
        routes: Vec<Route>,
    ) -> Result<Self> {
        let inst = Instance { m, capacities, horizon, max_delay, routes, weights: None };
        inst.validate()?;
        Ok(inst)
    }

    /// Replaces the objective weights; `weights[i][j]` is the cost of delaying flight `i` by `j`.
    pub fn with_weights(mut self, weights: Vec<Vec<f64>>) -> Result<Self> {
        self.weights = Some(weights);
        self.validate()?;
        Ok(self)
    }

    /// Drops custom weights, restoring cost `j` for delay `j`.
    pub fn with_default_weights(mut self) -> Self {
        self.weights = None;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return domain("at least one sector required");
        }
        if self.horizon == 0 {
            return domain("horizon must be at least 1");
        }
        if self.routes.is_empty() {
            return domain("at least one flight required");
        }
        if self.capacities.len() != self.m {
            return domain(format!(
                "capacities has length {}, expected {}",
                self.capacities.len(),
                self.m
            ));
        }
        for r in &self.routes {
            r.validate(self.m, self.horizon)?;
        }
        if let Some(w) = &self.weights {
            if w.len() != self.routes.len() {
                return domain(format!("weights has {} rows, expected {}", w.len(), self.routes.len()));
            }
            for (i, row) in w.iter().enumerate() {
                if row.len() != self.max_delay + 1 {
                    return domain(format!(
                        "weights row {i} has {} entries, expected {}",
                        row.len(),
                        self.max_delay + 1
                    ));
                }
                if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return domain(format!("weights row {i} must be finite and nonnegative"));
                }
            }
        }
        Ok(())
    }

    pub fn num_sectors(&self) -> usize {
        self.m
    }

    pub fn num_flights(&self) -> usize {
        self.routes.len()
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn max_delay(&self) -> usize {
        self.max_delay
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    /// Extended horizon `T + d` over which loads are checked.
    pub fn width(&self) -> usize {
        self.horizon + self.max_delay
    }

    /// Number of binary variables `n (d + 1)`.
    pub fn num_vars(&self) -> usize {
        self.routes.len() * (self.max_delay + 1)
    }

    /// Column of `x_ij` in the flight-major ordering.
    pub fn var_index(&self, flight: usize, delay: usize) -> usize {
        flight * (self.max_delay + 1) + delay
    }

    pub fn custom_weights(&self) -> Option<&[Vec<f64>]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, flight: usize, delay: usize) -> f64 {
        match &self.weights {
            Some(w) => w[flight][delay],
            None => delay as f64,
        }
    }

    /// Objective vector `c` in flight-major order.
    pub fn objective_vector(&self) -> Vec<f64> {
        (0..self.num_flights())
            .flat_map(|i| (0..=self.max_delay).map(move |j| (i, j)))
            .map(|(i, j)| self.weight(i, j))
            .collect()
    }

    /// Flattened 0-based cell indices occupied by `flight` at `delay`.
    pub fn cell_indices(&self, flight: usize, delay: usize) -> impl Iterator<Item = usize> + '_ {
        let width = self.width();
        self.routes[flight].cells(delay).map(move |(k, t)| k * width + t)
    }

    pub fn occupancy(&self, flight: usize, delay: usize) -> Result<OccupancyMatrix> {
        expanded_occupancy(&self.routes[flight], delay, self.m, self.horizon, self.max_delay)
    }

    pub fn evaluate(&self, schedule: &Schedule) -> Result<Evaluation> {
        evaluate_schedule(self, schedule)
    }
}

/// Checks every sector-period load against capacity and totals the delay.
pub fn evaluate_schedule(instance: &Instance, schedule: &Schedule) -> Result<Evaluation> {
    let n = instance.num_flights();
    if schedule.delays.len() != n {
        return domain(format!("schedule has {} delays, expected {n}", schedule.delays.len()));
    }
    if let Some(&j) = schedule.delays.iter().find(|&&j| j > instance.max_delay()) {
        return domain(format!("delay {j} exceeds maximum delay {}", instance.max_delay()));
    }
    let width = instance.width();
    let mut load = vec![0u32; instance.num_sectors() * width];
    for (i, &j) in schedule.delays.iter().enumerate() {
        for c in instance.cell_indices(i, j) {
            load[c] += 1;
        }
    }
    let violations: Vec<Violation> = load
        .iter()
        .enumerate()
        .filter_map(|(c, &l)| {
            let cap = instance.capacities()[c / width];
            (l > cap).then(|| Violation {
                sector: c / width + 1,
                period: c % width + 1,
                load: l,
                capacity: cap,
            })
        })
        .collect();
    let weighted_delay = schedule
        .delays
        .iter()
        .enumerate()
        .map(|(i, &j)| instance.weight(i, j))
        .sum();
    Ok(Evaluation {
        feasible: violations.is_empty(),
        total_delay: schedule.total_delay(),
        weighted_delay,
        violations,
    })
}

/// The four-sector, two-flight example: both flights cross sectors 2 and 4
/// in the same periods when neither is delayed.
pub fn toy_instance() -> Instance {
    Instance::new(
        4,
        vec![1; 4],
        4,
        1,
        vec![
            Route::new(1, 1, [(1, 1), (2, 1), (4, 1)]),
            Route::new(2, 1, [(3, 1), (2, 1), (4, 1)]),
        ],
    )
    .expect("toy instance is valid")
}
