//! `lyness`: verification suites, orbits, flows, reduced maps and figure
//! data for the k-dimensional Lyness map.
//!
//! Exit status: 0 on success, 1 when an identity check fails, 2 on usage
//! errors (bad flags, invalid parameters, unwritable output).

mod args;
mod commands;
mod table;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::args::{FigureArgs, FlowArgs, OrbitArgs, ReduceArgs, VerifyArgs};

#[derive(Parser)]
#[command(name = "lyness", version, about = "Lyness map verification and simulation laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded exact identity suites.
    Verify(VerifyArgs),
    /// Iterate the map and export the orbit with its level signature.
    Orbit(OrbitArgs),
    /// Integrate the flow of the Lie symmetry.
    Flow(FlowArgs),
    /// Iterate the reduced map on a level set of W (k = 3 or 5).
    Reduce(ReduceArgs),
    /// Export the data behind the reference figures.
    Figures(FigureArgs),
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid input or unusable output path: exit 2.
    Usage(String),
    /// A checked identity or contract did not hold: exit 1.
    Failed(String),
}

impl From<lyness::Error> for CliError {
    fn from(e: lyness::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Orbit(a) => commands::orbit(a),
        Command::Flow(a) => commands::flow(a),
        Command::Reduce(a) => commands::reduce(a),
        Command::Figures(a) => commands::figures(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("lyness: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("lyness: {msg}");
            ExitCode::from(2)
        }
    }
}
