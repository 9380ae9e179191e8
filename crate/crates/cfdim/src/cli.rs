//! Argument parsing, thread setup and output handling.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{self, cantor::CantorParams, dim::DimParams, expand::ExpandParams, exponents::ExponentsParams};
use crate::commands::{runlength::RunlengthParams, verify::VerifyParams};
use crate::config::{CommandConfig, Config, Globals};
use crate::error::{CliError, EXIT_PARSE};

/// Numerical laboratory for continued-fraction Diophantine approximation.
#[derive(Debug, Parser)]
#[command(name = "cfdim", version, about, propagate_version = true)]
pub struct Cli {
    /// Shared flags (echoed in every output).
    #[command(flatten)]
    pub globals: Globals,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CFDIM_THREADS")]
    pub threads: Option<usize>,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Re-run a configuration: a JSON file holding a previous output (its
    /// `config` member is used) or a bare configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Command.
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified partial quotients, convergents and cylinder intervals.
    Expand(ExpandParams),
    /// Dimension formulas, pre-dimensional numbers and pressure roots.
    Dim(DimParams),
    /// Cantor constructions: sequences, measure samples, local dimensions.
    Cantor(CantorParams),
    /// Exponent estimates of a digit file.
    Exponents(ExponentsParams),
    /// Maximal run-length profile.
    Runlength(RunlengthParams),
    /// Verification suites.
    Verify(VerifyParams),
}

impl Cli {
    /// The effective configuration.
    pub fn config(self) -> Result<Config, CliError> {
        if let Some(path) = &self.config {
            if self.command.is_some() {
                return Err(CliError::Parse("--config cannot be combined with a command".into()));
            }
            return Config::from_json(&fs::read_to_string(path)?);
        }
        let command = match self.command {
            Some(Command::Expand(p)) => CommandConfig::Expand(p),
            Some(Command::Dim(p)) => CommandConfig::Dim(p),
            Some(Command::Cantor(p)) => CommandConfig::Cantor(p),
            Some(Command::Exponents(p)) => CommandConfig::Exponents(p),
            Some(Command::Runlength(p)) => CommandConfig::Runlength(p),
            Some(Command::Verify(p)) => CommandConfig::Verify(p),
            None => return Err(CliError::Parse("a command or --config is required".into())),
        };
        Ok(Config {
            command,
            globals: self.globals,
        })
    }
}

fn init_threads(n: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Range("threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Range(e.to_string()))?;
    }
    Ok(())
}

/// Parse arguments, run, write the output and return the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    let threads = cli.threads;
    let output = cli.output.clone();
    let result = init_threads(threads)
        .and_then(|_| cli.config())
        .and_then(|cfg| commands::run(&cfg))
        .and_then(|out| {
            match &output {
                Some(path) => fs::write(path, &out.text)?,
                None => std::io::stdout().write_all(out.text.as_bytes())?,
            }
            Ok(out.exit)
        });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cfdim: {e}");
            e.exit_code()
        }
    }
}
