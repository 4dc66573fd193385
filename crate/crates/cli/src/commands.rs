use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use flowsched::exact::ExactOutcome;
use flowsched::model::{generate_instance, GeneratorParams};
use flowsched::model::{read_instance, write_instance};
use flowsched::rounding::RoundingReport;
use flowsched::sdp_solver::SdpSolution;
use flowsched::{Error, Instance};

use crate::pipeline::{run, Outcome, SolveConfig};
use crate::record::{write_records, Mode, RunRecord};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(read_instance(&text)?)
}

/// Generates an instance and writes it to `out_path`.
pub fn cmd_gen(params: &GeneratorParams, seed: u64, out_path: &Path) -> Result<(), CliError> {
    let instance = generate_instance(params, seed)?;
    fs::write(out_path, write_instance(&instance)).map_err(io_err(out_path))
}

/// Solves one instance file and prints the result. Returns whether the
/// requested pipeline finished successfully.
pub fn cmd_solve<W: Write>(
    instance_path: &Path,
    config: &SolveConfig,
    format: Format,
    out: &mut W,
) -> Result<bool, CliError> {
    let instance = load_instance(instance_path)?;
    let seed_column = config.perturb.map(|_| config.seed);
    let outcome = match run(&instance, config, seed_column) {
        Err(CliError::Core(Error::BudgetExceeded { required, budget })) => {
            return Err(CliError::Usage(format!(
                "exhaustive search needs {required:.3e} schedules, over the budget of {budget}; \
                 raise --budget or use --mode sdp"
            )))
        }
        other => other?,
    };
    match format {
        Format::Csv => write_records(&mut *out, std::slice::from_ref(&outcome.record))?,
        Format::Text => write_text(&mut *out, &outcome).map_err(io_err(Path::new("<stdout>")))?,
    }
    Ok(outcome.success)
}

fn write_text<W: Write>(out: &mut W, outcome: &Outcome) -> std::io::Result<()> {
    let r = &outcome.record;
    writeln!(out, "instance: m={} n={} T={} d={}", r.m, r.n, r.horizon, r.d)?;
    writeln!(out, "mode: {}", r.mode)?;
    if let Some(exact) = &outcome.exact {
        match exact {
            ExactOutcome::Optimal(sol) => {
                writeln!(out, "optimal value: {}", sol.objective)?;
                writeln!(out, "total delay: {}", sol.total_delay)?;
                writeln!(out, "schedule: {:?}", sol.schedule.delays)?;
            }
            ExactOutcome::Infeasible => writeln!(out, "no feasible schedule")?,
        }
    }
    if let Some(sol) = &outcome.sdp {
        write_relaxation(out, sol, outcome.bound)?;
    }
    if let Some(report) = &outcome.rounding {
        write_rounding(out, report)?;
    }
    writeln!(out, "wall time: {:.6} s", r.wall_s)?;
    writeln!(out, "status: {}", r.status)
}

fn write_relaxation<W: Write>(out: &mut W, sol: &SdpSolution, bound: Option<f64>) -> std::io::Result<()> {
    writeln!(out, "solver status: {} after {} iterations", sol.status, sol.iterations)?;
    writeln!(out, "relaxation objective: {:.9}", sol.objective)?;
    if let Some(b) = bound {
        writeln!(out, "lower bound: {b:.9}")?;
    }
    writeln!(out, "duality gap: {:.3e}", sol.metrics.rel_gap)?;
    writeln!(out, "trace(Z): {:.9}", sol.trace())?;
    if !sol.x.is_empty() {
        let x: Vec<String> = sol.x.iter().map(|v| format!("{v:.4}")).collect();
        writeln!(out, "x: [{}]", x.join(", "))?;
        let p = sol.x.len();
        let rank_gap = (0..p)
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .map(|(i, j)| (sol.big_x[(i, j)] - sol.x[i] * sol.x[j]).abs())
            .fold(0.0, f64::max);
        writeln!(out, "max |X - x x'|: {rank_gap:.3e}")?;
    }
    Ok(())
}

fn write_rounding<W: Write>(out: &mut W, report: &RoundingReport) -> std::io::Result<()> {
    writeln!(out, "samples: {} ({} feasible)", report.samples_drawn, report.feasible_count)?;
    match (&report.best, report.best_delay) {
        (Some(s), Some(d)) => writeln!(out, "best rounded delay: {d} with schedule {:?}", s.delays)?,
        _ => writeln!(out, "best rounded delay: none feasible")?,
    }
    Ok(())
}

/// Solves the relaxation, rounds it and writes the delay histogram CSV.
pub fn cmd_round<W: Write, E: Write>(
    instance_path: &Path,
    config: &SolveConfig,
    histogram: &mut W,
    summary: &mut E,
) -> Result<bool, CliError> {
    let instance = load_instance(instance_path)?;
    let config = SolveConfig { mode: Mode::SdpRound, ..config.clone() };
    let outcome = run(&instance, &config, Some(config.seed))?;
    let report = outcome.rounding.clone().unwrap_or_default();
    report.write_histogram_csv(&mut *histogram).map_err(io_err(Path::new("<histogram>")))?;
    let summary_err = io_err(Path::new("<stderr>"));
    (|| -> std::io::Result<()> {
        if let Some(b) = outcome.bound {
            writeln!(summary, "lower bound: {b:.9}")?;
        }
        write_rounding(summary, &report)?;
        writeln!(summary, "status: {}", outcome.record.status)
    })()
    .map_err(summary_err)?;
    Ok(outcome.success)
}

/// Instance grid for a benchmark sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub d: Vec<usize>,
    pub horizon: usize,
    pub seeds: Vec<u64>,
    pub modes: Vec<Mode>,
}

/// Runs every grid point in order `n, m, d, seed, mode` and returns the rows.
///
/// A failing instance is recorded with its error in the status column and the
/// sweep continues. Exact and relaxation rows of the same instance share their
/// oracle and bound values so each row can be checked on its own.
pub fn bench_records(grid: &BenchGrid, base: &SolveConfig) -> Result<Vec<RunRecord>, CliError> {
    if [grid.n.len(), grid.m.len(), grid.d.len(), grid.seeds.len(), grid.modes.len()].contains(&0) {
        return Err(CliError::Usage("benchmark grid is empty".into()));
    }
    let mut records = Vec::new();
    for &n in &grid.n {
        for &m in &grid.m {
            for &d in &grid.d {
                for &seed in &grid.seeds {
                    let params = GeneratorParams { m, n, horizon: grid.horizon, max_delay: d, ..Default::default() };
                    let first = records.len();
                    for &mode in &grid.modes {
                        let config = SolveConfig { mode, seed, ..base.clone() };
                        let result = generate_instance(&params, seed)
                            .map_err(CliError::from)
                            .and_then(|inst| run(&inst, &config, Some(seed)));
                        records.push(match result {
                            Ok(o) => o.record,
                            Err(e) => RunRecord {
                                m,
                                n,
                                horizon: grid.horizon,
                                d,
                                seed: Some(seed),
                                mode,
                                wall_s: 0.0,
                                sdp_bound: None,
                                oracle: None,
                                best_rounded: None,
                                status: failure_status(&e),
                            },
                        });
                    }
                    let rows = &mut records[first..];
                    let oracle = rows.iter().find_map(|r| r.oracle);
                    let bound = rows.iter().find_map(|r| r.sdp_bound);
                    for r in rows {
                        r.oracle = r.oracle.or(oracle);
                        r.sdp_bound = r.sdp_bound.or(bound);
                    }
                }
            }
        }
    }
    Ok(records)
}

fn failure_status(e: &CliError) -> String {
    match e {
        CliError::Core(Error::BudgetExceeded { .. }) => "BUDGET_EXCEEDED".into(),
        other => format!("ERROR: {other}"),
    }
}

/// Whether a row's run completed.
pub fn row_succeeded(r: &RunRecord) -> bool {
    r.status == "OPTIMAL" || r.status == "INFEASIBLE" || r.status == crate::pipeline::CERTIFIED
}

/// Median wall time per `(n, mode)` over completed rows.
pub fn median_times(records: &[RunRecord]) -> BTreeMap<(usize, Mode), (usize, f64)> {
    let mut groups: BTreeMap<(usize, Mode), Vec<f64>> = BTreeMap::new();
    for r in records.iter().filter(|r| row_succeeded(r)) {
        groups.entry((r.n, r.mode)).or_default().push(r.wall_s);
    }
    groups
        .into_iter()
        .map(|(k, mut v)| {
            v.sort_by(f64::total_cmp);
            let mid = v.len() / 2;
            let median = if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) };
            (k, (v.len(), median))
        })
        .collect()
}

/// Summary CSV with header `n,mode,runs,median_wall_s`.
pub fn write_median_csv<W: Write>(mut out: W, records: &[RunRecord]) -> std::io::Result<()> {
    writeln!(out, "n,mode,runs,median_wall_s")?;
    for ((n, mode), (runs, median)) in median_times(records) {
        writeln!(out, "{n},{mode},{runs},{median}")?;
    }
    Ok(())
}

/// Runs the sweep, writes the per-run CSV to `out_csv` and, when given, the
/// median summary to `summary_csv`. Returns whether every run completed.
pub fn cmd_bench(
    grid: &BenchGrid,
    base: &SolveConfig,
    out_csv: &Path,
    summary_csv: Option<&Path>,
) -> Result<bool, CliError> {
    let records = bench_records(grid, base)?;
    let file = fs::File::create(out_csv).map_err(io_err(out_csv))?;
    write_records(file, &records)?;
    if let Some(path) = summary_csv {
        let file = fs::File::create(path).map_err(io_err(path))?;
        write_median_csv(file, &records).map_err(io_err(path))?;
    }
    Ok(records.iter().all(row_succeeded))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: usize, mode: Mode, wall_s: f64, status: &str) -> RunRecord {
        RunRecord {
            m: 3,
            n,
            horizon: 5,
            d: 1,
            seed: Some(0),
            mode,
            wall_s,
            sdp_bound: None,
            oracle: None,
            best_rounded: None,
            status: status.into(),
        }
    }

    #[test]
    fn medians_skip_failures() {
        let rows = vec![
            rec(2, Mode::Sdp, 3.0, "OPTIMAL"),
            rec(2, Mode::Sdp, 1.0, "OPTIMAL"),
            rec(2, Mode::Sdp, 100.0, "MAX_ITERS"),
            rec(2, Mode::Exact, 0.5, "INFEASIBLE"),
            rec(4, Mode::Sdp, 5.0, "OPTIMAL"),
        ];
        let med = median_times(&rows);
        assert_eq!(med[&(2, Mode::Sdp)], (2, 2.0));
        assert_eq!(med[&(2, Mode::Exact)], (1, 0.5));
        assert_eq!(med[&(4, Mode::Sdp)], (1, 5.0));
    }

    #[test]
    fn empty_grid_rejected() {
        let grid = BenchGrid { n: vec![], m: vec![5], d: vec![1], horizon: 6, seeds: vec![0], modes: vec![Mode::Sdp] };
        assert!(bench_records(&grid, &SolveConfig::default()).is_err());
    }

    #[test]
    fn grid_order_and_cross_fill() {
        let grid = BenchGrid {
            n: vec![2, 3],
            m: vec![4],
            d: vec![1],
            horizon: 6,
            seeds: vec![5],
            modes: vec![Mode::Exact, Mode::Sdp],
        };
        let rows = bench_records(&grid, &SolveConfig::default()).unwrap();
        let keys: Vec<(usize, Mode)> = rows.iter().map(|r| (r.n, r.mode)).collect();
        assert_eq!(keys, vec![(2, Mode::Exact), (2, Mode::Sdp), (3, Mode::Exact), (3, Mode::Sdp)]);
        for r in &rows {
            if let (Some(b), Some(o)) = (r.sdp_bound, r.oracle) {
                assert!(b <= o + 1e-5);
            }
        }
    }
}
