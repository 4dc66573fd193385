//! Command-line pipeline for the flow scheduling relaxation: instance
//! generation, exact and relaxed solves, rounding and benchmark sweeps.

pub mod commands;
pub mod pipeline;
pub mod record;

pub use commands::{cmd_bench, cmd_gen, cmd_round, cmd_solve, BenchGrid, Format};
pub use pipeline::{run, Outcome, SolveConfig};
pub use record::{Mode, RunRecord, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] flowsched::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}
