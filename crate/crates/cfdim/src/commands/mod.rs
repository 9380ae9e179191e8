//! The subcommands. Each takes its parameters plus the shared flags and
//! produces the complete output text.

pub mod cantor;
pub mod dim;
pub mod expand;
pub mod exponents;
pub mod runlength;
pub mod verify;

use serde::Serialize;

use crate::config::{CommandConfig, Config};
use crate::error::{CliError, EXIT_CHECK_FAILED, EXIT_OK};
use crate::formats::{schema, to_json, Envelope};

/// Text produced by a command and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    /// Complete output (JSON or CSV).
    pub text: String,
    /// Exit status (0, or 1 when a verification check failed).
    pub exit: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, exit: EXIT_OK }
    }

    fn checked(text: String, passed: bool) -> Self {
        Output {
            text,
            exit: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
        }
    }
}

/// Wrap a result in the `{schema, config, result}` envelope.
pub fn envelope<R: Serialize>(cfg: &Config, result: &R) -> Result<String, CliError> {
    to_json(&Envelope {
        schema: schema(cfg.command.name()),
        config: cfg,
        result,
    })
}

/// Run a configuration.
pub fn run(cfg: &Config) -> Result<Output, CliError> {
    match &cfg.command {
        CommandConfig::Expand(p) => expand::run(cfg, p),
        CommandConfig::Dim(p) => dim::run(cfg, p),
        CommandConfig::Cantor(p) => cantor::run(cfg, p),
        CommandConfig::Exponents(p) => exponents::run(cfg, p),
        CommandConfig::Runlength(p) => runlength::run(cfg, p),
        CommandConfig::Verify(p) => verify::run(cfg, p),
    }
}
