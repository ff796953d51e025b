//! The `geoshear` command line.
//!
//! Exit codes: 0 all checks passed, 1 a bound was violated or a witness found,
//! 2 parse/validation error, 3 numeric failure, 4 inconclusive, 5 I/O error.

pub mod commands;
pub mod report;
pub mod scenario;
pub mod svg;

use clap::{Parser, Subcommand};

pub use report::{CheckEntry, Report, SCHEMA_VERSION};
pub use scenario::{Flags, PlotOptions, Scenario, Setup};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "geoshear", version, about = "Cesaro-type transforms, harmonic shears and univalence checks")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate rotate(C_{alpha beta}[phi], theta) at --z points
    Transform(Flags),
    /// Evaluate the shear H, G, F = H + conj(G) at --z points
    Shear(Flags),
    /// Run criteria and empirical checks, producing a JSON report
    Check(Flags),
    /// Query a theorem's bound (--theorem)
    Bounds(Flags),
    /// Render the image of a polar grid as SVG
    Plot(Flags),
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Transform(f) => commands::transform(f),
        Command::Shear(f) => commands::shear(f),
        Command::Check(f) => commands::check(f),
        Command::Bounds(f) => commands::bounds(f),
        Command::Plot(f) => commands::plot(f),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("geoshear: {e}");
            e.exit_code()
        }
    }
}
