//! Errors and the exit-code policy.

use cfdim_core::cantor::CantorError;
use cfdim_core::cf::CfError;
use cfdim_core::dim::DimError;
use cfdim_core::exponents::ExponentError;
use cfdim_core::runlength::RunLengthError;

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: a verification check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status: malformed input or arguments.
pub const EXIT_PARSE: i32 = 2;
/// Exit status: a parameter is outside its domain.
pub const EXIT_RANGE: i32 = 3;
/// Exit status: a computation budget was exceeded.
pub const EXIT_BUDGET: i32 = 4;

/// Errors surfaced by the commands.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Parameter outside its domain.
    #[error("range error: {0}")]
    Range(String),
    /// Budget exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// File or stream failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => EXIT_PARSE,
            CliError::Range(_) => EXIT_RANGE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<CfError> for CliError {
    fn from(e: CfError) -> Self {
        match e {
            CfError::InvalidInput(_) => CliError::Parse(e.to_string()),
            _ => CliError::Range(e.to_string()),
        }
    }
}

impl From<DimError> for CliError {
    fn from(e: DimError) -> Self {
        match e {
            DimError::Budget(_) => CliError::Budget(e.to_string()),
            _ => CliError::Range(e.to_string()),
        }
    }
}

impl From<CantorError> for CliError {
    fn from(e: CantorError) -> Self {
        match e {
            CantorError::Dim(d) => d.into(),
            _ => CliError::Range(e.to_string()),
        }
    }
}

impl From<ExponentError> for CliError {
    fn from(e: ExponentError) -> Self {
        CliError::Range(e.to_string())
    }
}

impl From<RunLengthError> for CliError {
    fn from(e: RunLengthError) -> Self {
        CliError::Range(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<cfdim_core::num::ParseParamError> for CliError {
    fn from(e: cfdim_core::num::ParseParamError) -> Self {
        CliError::Parse(e.to_string())
    }
}
