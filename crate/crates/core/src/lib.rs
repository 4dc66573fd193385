//! Ground-delay scheduling of flights through capacity-limited airspace sectors.
//!
//! The pipeline has four layers:
//!
//! - [`model`]: routes, instances, occupancy matrices and schedule evaluation.
//! - [`exact`]: the 0/1 program data and an exhaustive depth-first oracle.
//! - [`relax`]: quadratic lifting, the Lagrangian dual and the semidefinite
//!   relaxation whose optimum lower-bounds the total delay.
//! - [`sdp_solver`]: a dense primal-dual interior-point method for the
//!   relaxations above.
//! - [`rounding`]: Gaussian sampling around the relaxed solution and projection
//!   onto one-hot schedules.

pub mod error;
mod linalg;
pub mod exact;
pub mod model;
pub mod relax;
pub mod rounding;
pub mod sdp_solver;

pub use error::{Error, Result};
pub use model::{Instance, Leg, OccupancyMatrix, Route, Schedule};
