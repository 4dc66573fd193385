//! JSON instance documents.
//!
//! ```json
//! { "m": 4, "capacities": [1, 1, 1, 1], "T": 4, "d": 1,
//!   "flights": [ { "id": 1, "departure": 1, "legs": [ { "sector": 1, "dwell": 1 } ] } ],
//!   "weights": [[0.0, 1.0]] }
//! ```
//!
//! `weights` is optional; unknown keys are rejected.

use serde::{Deserialize, Serialize};

use super::{Instance, Leg, Route};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    m: usize,
    capacities: Vec<u32>,
    #[serde(rename = "T")]
    horizon: usize,
    d: usize,
    flights: Vec<FlightDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlightDoc {
    id: u32,
    departure: usize,
    legs: Vec<LegDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LegDoc {
    sector: usize,
    dwell: usize,
}

/// Name inside the first pair of backticks of a serde message, if any.
fn backticked(msg: &str) -> Option<&str> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(&msg[start..start + len])
}

fn parse_error(e: serde_json::Error) -> Error {
    let message = e.to_string();
    let field = backticked(&message).unwrap_or("document").to_string();
    Error::Parse { field, message }
}

fn invalid(field: &str, e: Error) -> Error {
    let message = match e {
        Error::Domain(m) => m,
        other => other.to_string(),
    };
    Error::Parse { field: field.to_string(), message }
}

pub fn read_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(parse_error)?;
    if doc.capacities.len() != doc.m {
        return Err(Error::Parse {
            field: "capacities".into(),
            message: format!("expected {} entries, found {}", doc.m, doc.capacities.len()),
        });
    }
    let routes: Vec<Route> = doc
        .flights
        .into_iter()
        .map(|f| Route {
            flight_id: f.id,
            departure: f.departure,
            legs: f.legs.into_iter().map(|l| Leg { sector: l.sector, dwell: l.dwell }).collect(),
        })
        .collect();
    for r in &routes {
        r.validate(doc.m, doc.horizon).map_err(|e| invalid("flights", e))?;
    }
    let inst = Instance::new(doc.m, doc.capacities, doc.horizon, doc.d, routes)
        .map_err(|e| invalid("flights", e))?;
    match doc.weights {
        Some(w) => inst.with_weights(w).map_err(|e| invalid("weights", e)),
        None => Ok(inst),
    }
}

/// Canonical pretty-printed document with a trailing newline.
pub fn write_instance(instance: &Instance) -> String {
    let doc = InstanceDoc {
        m: instance.num_sectors(),
        capacities: instance.capacities().to_vec(),
        horizon: instance.horizon(),
        d: instance.max_delay(),
        flights: instance
            .routes()
            .iter()
            .map(|r| FlightDoc {
                id: r.flight_id,
                departure: r.departure,
                legs: r.legs.iter().map(|l| LegDoc { sector: l.sector, dwell: l.dwell }).collect(),
            })
            .collect(),
        weights: instance.custom_weights().map(|w| w.to_vec()),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("instance serializes");
    text.push('\n');
    text
}
