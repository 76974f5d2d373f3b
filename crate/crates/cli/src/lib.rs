//! Command-line front end for the `fqwell` solver.
//!
//! [`run`] does all the work and returns the exit code and text streams, so
//! the binary is a thin shell and tests can drive commands in-process.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::JobConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Solver(_) => 4,
        }
    }

    /// Library errors raised while checking configuration values.
    pub(crate) fn from_config(e: fqwell::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<fqwell::Error> for CliError {
    fn from(e: fqwell::Error) -> Self {
        use fqwell::Error as E;
        match e {
            E::Argument(_) => CliError::Config(e.to_string()),
            E::Domain(_) | E::Overflow(_) => CliError::Domain(e.to_string()),
            E::Convergence { .. } | E::EigenSolve(_) => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fqwell",
    version,
    about = "Bound states of a finite square well under fractional quantum mechanics",
    after_help = "Options may come from a JSON document given with --config (use - for stdin). \
                  Flags override fields of that document."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON job document; `-` reads standard input
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub job: JobConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bound-state levels: index, parity, sigma, eta, E/U
    Spectrum,
    /// Normalized eigenfunction samples for one level
    Wavefunction,
    /// Parity curves, constraint curve and root markers for plotting
    Plotdata,
    /// Level count and E_n/U across a range of alpha or g
    Sweep,
    /// Cross-check against a Fourier-grid diagonalization
    Compare,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(e: CliError) -> Self {
        Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Merges the config document (if any) with the command-line flags.
pub fn resolve(cli: &Cli, stdin: &mut dyn Read) -> Result<JobConfig, CliError> {
    let base = match &cli.config {
        Some(path) => JobConfig::load(path, stdin)?,
        None => JobConfig::default(),
    };
    Ok(base.overlay(&cli.job))
}

pub fn execute(command: Command, cfg: &JobConfig) -> Result<String, CliError> {
    match command {
        Command::Spectrum => commands::spectrum(cfg),
        Command::Wavefunction => commands::wavefunction(cfg),
        Command::Plotdata => commands::plotdata(cfg),
        Command::Sweep => commands::sweep(cfg),
        Command::Compare => commands::compare_cmd(cfg),
    }
}

pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match resolve(&cli, stdin).and_then(|cfg| execute(cli.command, &cfg)) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome::failure(e),
    }
}
