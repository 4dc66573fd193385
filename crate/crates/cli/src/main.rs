use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flowsched::exact::DEFAULT_BUDGET;
use flowsched::model::GeneratorParams;
use flowsched::rounding::DEFAULT_SAMPLES;
use flowsched::sdp_solver::SolverOptions;
/// `--perturb` with no value; kept equal to `DEFAULT_PERTURBATION`.
const PERTURB_DEFAULT: &str = "0.001";
use flowsched_cli::{cmd_bench, cmd_gen, cmd_round, cmd_solve, BenchGrid, CliError, Format, Mode, SolveConfig};

#[derive(Parser)]
#[command(name = "flowsched", version, about = "Air traffic flow scheduling by semidefinite relaxation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Solve one instance file.
    Solve(SolveArgs),
    /// Solve the relaxation, round it and emit the delay histogram.
    Round(RoundArgs),
    /// Sweep a grid of generated instances and write timing CSVs.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long = "T", default_value_t = 30)]
    horizon: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    cap_min: u32,
    #[arg(long, default_value_t = 3)]
    cap_max: u32,
    #[arg(long, default_value_t = 3)]
    route_min: usize,
    #[arg(long, default_value_t = 8)]
    route_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Relative duality gap tolerance.
    #[arg(long, default_value_t = SolverOptions::default().gap_tol)]
    gap_tol: f64,
    /// Residual tolerance.
    #[arg(long, default_value_t = SolverOptions::default().feas_tol)]
    feas_tol: f64,
    #[arg(long, default_value_t = SolverOptions::default().max_iters)]
    max_iters: usize,
    /// Rounding samples, the relaxed mean included.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Largest number of schedules the exhaustive search may visit.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Add uniform [0, EPS) noise to the objective weights.
    #[arg(long, num_args = 0..=1, default_missing_value = PERTURB_DEFAULT)]
    perturb: Option<f64>,
    /// Seed for the perturbation and for rounding.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self, mode: Mode) -> SolveConfig {
        SolveConfig {
            mode,
            solver: SolverOptions {
                gap_tol: self.gap_tol,
                feas_tol: self.feas_tol,
                max_iters: self.max_iters,
                ..SolverOptions::default()
            },
            samples: self.samples,
            budget: self.budget,
            perturb: self.perturb,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Sdp)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct RoundArgs {
    instance: PathBuf,
    /// Histogram destination; standard output when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 15, 20])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [50])]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [2])]
    d: Vec<usize>,
    #[arg(long = "T", default_value_t = 30)]
    horizon: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    seeds: Vec<u64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Mode::Sdp])]
    modes: Vec<Mode>,
    /// Per-run CSV.
    #[arg(short, long)]
    out: PathBuf,
    /// Median wall time per (n, mode).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Gen(a) => {
            let params = GeneratorParams {
                m: a.m,
                n: a.n,
                horizon: a.horizon,
                max_delay: a.d,
                capacity_range: a.cap_min..=a.cap_max,
                route_length_range: a.route_min..=a.route_max,
            };
            cmd_gen(&params, a.seed, &a.out)?;
            Ok(true)
        }
        Command::Solve(a) => {
            let stdout = io::stdout();
            cmd_solve(&a.instance, &a.solver.config(a.mode), a.format, &mut stdout.lock())
        }
        Command::Round(a) => {
            let config = a.solver.config(Mode::SdpRound);
            let stderr = io::stderr();
            match &a.out {
                Some(path) => {
                    let mut file = std::fs::File::create(path)
                        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    let ok = cmd_round(&a.instance, &config, &mut file, &mut stderr.lock())?;
                    file.flush().map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    Ok(ok)
                }
                None => cmd_round(&a.instance, &config, &mut io::stdout().lock(), &mut stderr.lock()),
            }
        }
        Command::Bench(a) => {
            let grid = BenchGrid { n: a.n, m: a.m, d: a.d, horizon: a.horizon, seeds: a.seeds, modes: a.modes };
            cmd_bench(&grid, &a.solver.config(Mode::Sdp), &a.out, a.summary.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bare_perturb_flag_uses_default() {
        assert_eq!(PERTURB_DEFAULT.parse::<f64>().unwrap(), flowsched_cli::pipeline::DEFAULT_PERTURBATION);
        let cli = Cli::try_parse_from(["flowsched", "solve", "a.json", "--perturb", "--seed", "7"]).unwrap();
        let Command::Solve(a) = cli.command else { panic!("expected solve") };
        assert_eq!(a.solver.perturb, Some(1e-3));
        assert_eq!(a.solver.seed, 7);
    }
}
