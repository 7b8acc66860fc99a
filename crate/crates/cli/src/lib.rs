//! Command-line front end: file formats, configuration and the
//! `simulate | analyze | compare | classify` subcommands.
//!
//! Exit codes: 0 success or hermetic, 1 breached, 2 inconclusive,
//! 3 runtime failure, 64 malformed command line.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod stack_file;

use clap::{Parser, Subcommand};

pub use commands::{EXIT_FAILURE, EXIT_USAGE};
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "thermal-transient", version, about = "Thermal transient analysis and structure functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the step response of a layer stack or ladder
    Simulate(commands::SimulateArgs),
    /// Identify spectrum and structure function of measured transients
    Analyze(commands::AnalyzeArgs),
    /// Find the divergence point of two structure functions
    Compare(commands::CompareArgs),
    /// Hermeticity verdict of a measurement against a dry reference
    Classify(commands::ClassifyArgs),
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Analyze(a) => commands::analyze_files(a),
        Command::Compare(a) => commands::compare(a),
        Command::Classify(a) => commands::classify(a),
    }
}
