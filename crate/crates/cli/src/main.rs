//! `regshrink` command-line tool: simulate data, fit shrinkage models,
//! summarize draws and tabulate the horseshoe sampler's acceptance rate.

mod accept;
mod config;
mod diagnose;
mod fit;
mod io;
mod simulate;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "regshrink", version, about = "Gibbs samplers for regularized shrinkage priors")]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for the subcommand's
    /// flags; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,

    /// Worker threads for the parallel parts of the samplers.
    #[arg(long, global = true, env = "REGSHRINK_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a weak-signal logistic dataset.
    Simulate(simulate::SimulateArgs),
    /// Run a Gibbs sampler on a dataset.
    Fit(fit::FitArgs),
    /// Summarize stored draws: traces, autocorrelations, intervals, coverage.
    Diagnose(diagnose::DiagnoseArgs),
    /// Tabulate the horseshoe rejection sampler's acceptance rate over b.
    AcceptCurve(accept::AcceptArgs),
}

/// Exit status for input and usage errors.
const EXIT_INPUT: u8 = 2;
/// Exit status for numerical failures inside a sampler.
const EXIT_NUMERIC: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<regshrink::Error>() {
            return match e {
                regshrink::Error::Computation(_) | regshrink::Error::Divergence { .. } => EXIT_NUMERIC,
                _ => EXIT_INPUT,
            };
        }
    }
    EXIT_INPUT
}

fn main() -> ExitCode {
    let argv = match config::expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let cli = Cli::parse_from(argv);
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    let result = match &cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Fit(a) => fit::run(a),
        Command::Diagnose(a) => diagnose::run(a),
        Command::AcceptCurve(a) => accept::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
