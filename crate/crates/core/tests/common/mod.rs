//! Reference implementations shared by the integration tests. Everything here
//! is written directly from the problem statement, without the library's
//! indexing helpers, so it can serve as an independent check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use flowsched::model::{generate_instance, GeneratorParams, Instance};

/// Small instance number `k` of a deterministic family spanning
/// `m <= 10`, `n <= 5`, `d <= 3`, `T <= 12`.
pub fn small_instance(k: u64) -> Instance {
    let m = 2 + (k % 9) as usize;
    let n = 1 + ((k / 3) % 5) as usize;
    let d = ((k / 7) % 4) as usize;
    let horizon = 3 + ((k / 2) % 10) as usize;
    let params = GeneratorParams {
        m,
        n,
        horizon,
        max_delay: d,
        capacity_range: 0..=2,
        route_length_range: 1..=4,
    };
    generate_instance(&params, 1000 + k).expect("small family parameters are valid")
}

/// Load of every `(sector, period)` pair (1-based) that some flight occupies.
pub fn naive_loads(instance: &Instance, delays: &[usize]) -> BTreeMap<(usize, usize), u32> {
    let mut loads = BTreeMap::new();
    for (route, &delay) in instance.routes().iter().zip(delays) {
        let mut period = route.departure + delay;
        for leg in &route.legs {
            for _ in 0..leg.dwell {
                *loads.entry((leg.sector, period)).or_insert(0) += 1;
                period += 1;
            }
        }
    }
    loads
}

/// Overloaded `(sector, period)` pairs.
pub fn naive_overloads(instance: &Instance, delays: &[usize]) -> Vec<(usize, usize)> {
    naive_loads(instance, delays)
        .into_iter()
        .filter(|&((k, _), load)| load > instance.capacities()[k - 1])
        .map(|(cell, _)| cell)
        .collect()
}

pub fn naive_feasible(instance: &Instance, delays: &[usize]) -> bool {
    naive_overloads(instance, delays).is_empty()
}

pub fn naive_cost(instance: &Instance, delays: &[usize]) -> f64 {
    delays.iter().enumerate().map(|(i, &j)| instance.weight(i, j)).sum()
}

/// Every delay vector in `{0..=d}^n`, in lexicographic order.
pub fn all_schedules(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    loop {
        out.push(cur.clone());
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < d {
                cur[pos] += 1;
                for c in &mut cur[pos + 1..] {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Full enumeration without pruning; first strict minimum in lexicographic order.
pub fn naive_optimum(instance: &Instance) -> Option<(f64, Vec<usize>)> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    for s in all_schedules(instance.num_flights(), instance.max_delay()) {
        if !naive_feasible(instance, &s) {
            continue;
        }
        let c = naive_cost(instance, &s);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, s));
        }
    }
    best
}
