use std::ops::RangeInclusive;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, Leg, Route};
use crate::error::{domain, Result};

/// Random instance recipe.
///
/// Each route visits `len` distinct sectors drawn uniformly without
/// replacement, one period per sector, with `len` uniform in
/// `route_length_range` and the departure uniform over the periods that keep
/// the undelayed route inside the horizon. Capacities are uniform in
/// `capacity_range`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub m: usize,
    pub n: usize,
    pub horizon: usize,
    pub max_delay: usize,
    pub capacity_range: RangeInclusive<u32>,
    pub route_length_range: RangeInclusive<usize>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            m: 50,
            n: 20,
            horizon: 30,
            max_delay: 2,
            capacity_range: 1..=3,
            route_length_range: 3..=8,
        }
    }
}

pub fn generate_instance(params: &GeneratorParams, seed: u64) -> Result<Instance> {
    let GeneratorParams { m, n, horizon, max_delay, .. } = *params;
    if n == 0 || m == 0 || horizon == 0 {
        return domain("m, n and T must all be at least 1");
    }
    if params.capacity_range.is_empty() || params.route_length_range.is_empty() {
        return domain("capacity and route length ranges must be nonempty");
    }
    let min_len = (*params.route_length_range.start()).max(1);
    let max_len = (*params.route_length_range.end()).min(m).min(horizon);
    if min_len > max_len {
        return domain(format!(
            "no route length in {:?} fits {m} sectors and horizon {horizon}",
            params.route_length_range
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let capacities = (0..m).map(|_| rng.random_range(params.capacity_range.clone())).collect();
    let routes = (0..n)
        .map(|i| {
            let len = rng.random_range(min_len..=max_len);
            let departure = rng.random_range(1..=horizon - len + 1);
            let legs = index::sample(&mut rng, m, len)
                .into_iter()
                .map(|k| Leg { sector: k + 1, dwell: 1 })
                .collect();
            Route { flight_id: i as u32 + 1, departure, legs }
        })
        .collect();
    Instance::new(m, capacities, horizon, max_delay, routes)
}
