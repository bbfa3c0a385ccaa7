//! Command-line driver: experiment specs in, CSV/JSON tables out, plus a
//! manifest digesting everything written.
//!
//! Exit codes: 0 success (inconclusive verdicts included), 2 validation
//! failure (bad spec, bad flags, missing inputs), 3 computation failure,
//! 4 at least one violated conjecture check.

mod commands;
mod output;
mod spec;

use clap::{Parser, Subcommand};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Computation(String),
}

#[derive(Parser)]
#[command(
    name = "dynadeg",
    version,
    about = "degree and height growth of dominant rational self-maps of projective space"
)]
struct Cli {
    /// Experiment spec file (required by every subcommand except plotdata)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,

    /// Seed for randomized subroutines (topological-degree sampling)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Relative tolerance for conjecture verdicts
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Iteration horizon N; tables run n = 0..=N
    #[arg(long, global = true)]
    horizon: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree sequence of the iterates, growth estimates, recurrence model
    Degrees,
    /// Orbit height tables for every point and cycle in the spec
    Orbit,
    /// Certified dynamical-degree table of a monomial map
    Monomial,
    /// Conjecture and theorem checks; exits 4 when any check is violated
    Conjectures,
    /// Two-column (n, ln value) files from a completed run's tables
    Plotdata,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if matches!(cli.command, Command::Plotdata) {
        let out = cli
            .out
            .unwrap_or_else(|| PathBuf::from(commands::DEFAULT_OUT));
        return commands::cmd_plotdata(&out);
    }
    let path = cli
        .spec
        .as_ref()
        .ok_or_else(|| CliError::Validation("--spec PATH is required for this command".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read spec {}: {e}", path.display())))?;
    let spec = spec::ExperimentSpec::parse(&text, path.parent())
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let ctx = commands::Ctx::new(spec, &text, cli.out, cli.seed, cli.tol, cli.horizon)?;
    match cli.command {
        Command::Degrees => commands::cmd_degrees(&ctx),
        Command::Orbit => commands::cmd_orbit(&ctx),
        Command::Monomial => commands::cmd_monomial(&ctx),
        Command::Conjectures => commands::cmd_conjectures(&ctx),
        Command::Plotdata => unreachable!("handled above"),
    }
}
