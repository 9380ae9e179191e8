//! Command-line front end and verification suites for the `cfdim-core`
//! continued-fraction kernels.
//!
//! Every command produces `{"schema": "cfdim/<command>/v1", "config": …,
//! "result": …}`; the echoed configuration re-runs to byte-identical output
//! (see [`config::Config`]).

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod report;
pub mod verify;

pub use commands::{run, Output};
pub use config::{CommandConfig, Config, Format, Globals};
pub use error::CliError;
