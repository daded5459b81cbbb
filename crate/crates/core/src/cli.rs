//! Command-line front end. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 solver failure.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::analysis::{monte_carlo, sweep_constant, sweep_grid, welfare_report, MonteCarloError};
use crate::demand::{nash_demands, run_demand_game};
use crate::geometry::{bargaining_set, ImageError};
use crate::model::ModelError;
use crate::output;
use crate::scenario::{Scenario, ScenarioError};
use crate::solver::{closed_form_example, solve, SolverError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "delta-nash", version, about = "Nash bargaining with partially rational players")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the scenario at its own deltas.
    Solve { scenario: PathBuf },
    /// Closed-form solution of the profit-split game.
    Example {
        #[arg(long)]
        delta1: f64,
        #[arg(long)]
        delta2: f64,
        #[arg(long, default_value_t = 100.0)]
        budget: f64,
    },
    /// Solve over a grid of delta pairs.
    Sweep {
        scenario: PathBuf,
        /// a:b:step, both ends included
        #[arg(long, value_parser = parse_range)]
        delta1: DeltaRange,
        #[arg(long, value_parser = parse_range)]
        delta2: DeltaRange,
    },
    /// Solve with both deltas equal, over a range.
    ConstSweep {
        scenario: PathBuf,
        #[arg(long, value_parser = parse_range)]
        delta: DeltaRange,
    },
    /// Monte Carlo over the scenario's delta distributions.
    Mc {
        scenario: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bargaining set as payoff-space plot data.
    Bset {
        scenario: PathBuf,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        #[arg(long)]
        delta1: Option<f64>,
        #[arg(long)]
        delta2: Option<f64>,
    },
    /// Play the demand game with the scenario's disagreement as threats.
    /// Demands default to the Nash solution payoffs.
    Demand {
        scenario: PathBuf,
        #[arg(long)]
        demand1: Option<f64>,
        #[arg(long)]
        demand2: Option<f64>,
    },
    /// Rational and distortion values at the solution, against the fully
    /// rational benchmark.
    Welfare { scenario: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRange(pub Vec<f64>);

/// Parses `a:b:step` (or a single number) into the points
/// `a, a + step, …`, keeping `b` when the last step lands within 1e-12 of it.
pub fn parse_range(text: &str) -> Result<DeltaRange, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}"));
    match parts.as_slice() {
        [x] => Ok(DeltaRange(vec![num(x)?])),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(format!("range start {a} must not exceed end {b}"));
            }
            if !(step > 0.0 && step.is_finite()) {
                return Err(format!("step must be positive, got {step}"));
            }
            let mut values = Vec::new();
            for k in 0.. {
                let v = a + k as f64 * step;
                if (v - b).abs() <= 1e-12 {
                    values.push(b);
                    break;
                }
                if v > b {
                    break;
                }
                values.push(v);
            }
            Ok(DeltaRange(values))
        }
        _ => Err(format!("expected a:b:step, got {text:?}")),
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::Domain(_) | SolverError::InvalidOptions(_) => EXIT_INVALID,
            _ => EXIT_SOLVER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

impl From<ImageError> for Failure {
    fn from(e: ImageError) -> Self {
        let code = match e {
            ImageError::Resolution(_) => EXIT_INVALID,
            ImageError::Eval(_) => EXIT_SOLVER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<MonteCarloError> for Failure {
    fn from(e: MonteCarloError) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

fn execute(command: Command, err: &mut dyn Write) -> Result<String, Failure> {
    Ok(match command {
        Command::Solve { scenario } => {
            let scn = Scenario::load(scenario)?;
            output::solution_csv(&solve(&scn.game()?, &scn.solver)?)
        }
        Command::Example { delta1, delta2, budget } => {
            output::solution_csv(&closed_form_example(delta1, delta2, budget)?)
        }
        Command::Sweep { scenario, delta1, delta2 } => {
            let scn = Scenario::load(scenario)?;
            let table = sweep_grid(&scn.template()?, &delta1.0, &delta2.0, &scn.solver)?;
            report_failed_rows(err, table.rows.iter().map(|r| (r.deltas, &r.outcome)));
            output::sweep_csv(&table)
        }
        Command::ConstSweep { scenario, delta } => {
            let scn = Scenario::load(scenario)?;
            let table = sweep_constant(&scn.template()?, &delta.0, &scn.solver)?;
            report_failed_rows(err, table.rows.iter().map(|r| (r.deltas, &r.outcome)));
            output::sweep_csv(&table)
        }
        Command::Mc { scenario, n, seed } => {
            let scn = Scenario::load(scenario)?;
            let [d1, d2] = scn.distributions()?;
            let report = monte_carlo(&scn.template()?, &d1, &d2, n, seed, &scn.solver)?;
            report_failed_rows(err, report.rows.iter().map(|r| (r.deltas, &r.outcome)));
            output::monte_carlo_csv(&report)
        }
        Command::Bset {
            scenario,
            resolution,
            delta1,
            delta2,
        } => {
            let scn = Scenario::load(scenario)?;
            let game = match (delta1, delta2) {
                (None, None) => scn.game()?,
                _ => {
                    let fixed = |i: usize, given: Option<f64>| -> Result<f64, Failure> {
                        given.or(scn.description.players[i].delta).ok_or_else(|| Failure {
                            code: EXIT_INVALID,
                            message: format!("player{}.delta: no fixed delta; pass --delta{}", i + 1, i + 1),
                        })
                    };
                    scn.template()?.with_deltas(fixed(0, delta1)?, fixed(1, delta2)?)?
                }
            };
            output::bargaining_set_csv(&bargaining_set(&game, resolution)?)
        }
        Command::Demand {
            scenario,
            demand1,
            demand2,
        } => {
            let scn = Scenario::load(scenario)?;
            let game = scn.game()?;
            let demands = match (demand1, demand2) {
                (Some(q1), Some(q2)) => [q1, q2],
                _ => {
                    let nash = nash_demands(&game, &scn.solver)?;
                    [demand1.unwrap_or(nash[0]), demand2.unwrap_or(nash[1])]
                }
            };
            output::transcript_csv(&run_demand_game(&game, game.disagreement(), demands, &scn.solver)?)
        }
        Command::Welfare { scenario } => {
            let scn = Scenario::load(scenario)?;
            let game = scn.game()?;
            let sol = solve(&game, &scn.solver)?;
            output::welfare_csv(&welfare_report(&game, &sol, &scn.solver)?)
        }
    })
}

fn report_failed_rows<'a, T: 'a>(err: &mut dyn Write, rows: impl Iterator<Item = ([f64; 2], &'a Result<T, String>)>) {
    for (deltas, outcome) in rows {
        if let Err(e) = outcome {
            let _ = writeln!(err, "warning: delta=({}, {}) failed: {e}", deltas[0], deltas[1]);
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, err) {
        Ok(text) => match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
            Ok(()) => EXIT_OK,
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_SOLVER
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
