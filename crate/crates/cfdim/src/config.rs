//! The effective run configuration echoed by every command.
//!
//! A configuration contains everything that influences the output. The
//! thread count and the output path are deliberately excluded: results do
//! not depend on them, so an echoed configuration reproduces the output
//! byte for byte on any machine.

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use cfdim_core::dim::DEFAULT_BUDGET;

use crate::commands::{
    cantor::CantorParams, dim::DimParams, expand::ExpandParams, exponents::ExponentsParams,
    runlength::RunlengthParams, verify::VerifyParams,
};
use crate::error::CliError;

/// Default precision budget in bits for finite-precision inputs.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
/// Default master seed.
pub const DEFAULT_SEED: u64 = 1;

/// Output format.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// CSV for parameter sweeps, JSON otherwise.
    #[default]
    Auto,
    /// Always JSON.
    Json,
    /// CSV where a table exists (sweeps), JSON otherwise.
    Csv,
}

/// Flags shared by all commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Args)]
pub struct Globals {
    /// Precision budget in bits for decimal inputs.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
    /// Node budget of the enumeration solver.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Master seed of all random streams.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Auto)]
    pub format: Format,
}

impl Default for Globals {
    fn default() -> Self {
        Globals {
            precision_bits: DEFAULT_PRECISION_BITS,
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            format: Format::Auto,
        }
    }
}

/// Per-command parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "lowercase")]
pub enum CommandConfig {
    /// Continued-fraction expansion.
    Expand(ExpandParams),
    /// Dimension values.
    Dim(DimParams),
    /// Cantor constructions and their measures.
    Cantor(CantorParams),
    /// Exponent estimates from a digit file.
    Exponents(ExponentsParams),
    /// Run-length profile.
    Runlength(RunlengthParams),
    /// Verification suites.
    Verify(VerifyParams),
}

impl CommandConfig {
    /// Command name (also the schema stem).
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Expand(_) => "expand",
            CommandConfig::Dim(_) => "dim",
            CommandConfig::Cantor(_) => "cantor",
            CommandConfig::Exponents(_) => "exponents",
            CommandConfig::Runlength(_) => "runlength",
            CommandConfig::Verify(_) => "verify",
        }
    }
}

/// A complete, reproducible run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Command and its parameters.
    #[serde(flatten)]
    pub command: CommandConfig,
    /// Shared flags.
    pub globals: Globals,
}

impl Config {
    /// Read a configuration from JSON: either a bare configuration or a
    /// complete command output, whose `config` member is used.
    pub fn from_json(text: &str) -> Result<Config, CliError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let inner = match v.get("config") {
            Some(c) if v.get("schema").is_some() => c.clone(),
            _ => v,
        };
        Ok(serde_json::from_value(inner)?)
    }
}
