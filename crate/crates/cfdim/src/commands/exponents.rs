//! `exponents`: record blocks and `(ν̂, ν)` estimates of a digit file.

use std::fs;

use clap::Args;
use serde::{Deserialize, Serialize};

use cfdim_core::cf::DigitSeq;
use cfdim_core::exponents::{decompose, exponent_estimates};

use super::{envelope, Output};
use crate::config::Config;
use crate::error::CliError;
use crate::formats::parse_digits;

/// Parameters of `exponents`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Args)]
pub struct ExponentsParams {
    /// Target digit `i` of `y = [i, i, …]`.
    #[arg(long, default_value_t = 1)]
    pub target_i: u64,
    /// Digit file (integers separated by whitespace or commas; `#` comments).
    #[arg(long)]
    pub input: String,
    /// Horizon `N` (clamped to the number of digits read).
    #[arg(long = "N")]
    pub n: Option<u64>,
}

/// A record block `[n, m)` of consecutive `i`'s (0-based start, exclusive end).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockOut {
    /// Start.
    pub n: u64,
    /// End.
    pub m: u64,
    /// Length `m − n`.
    pub len: u64,
    /// The block reaches the end of the data.
    pub open: bool,
}

/// Result of `exponents`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentsResult {
    /// Digits read.
    pub digits_read: u64,
    /// Horizon used.
    pub horizon: u64,
    /// True when the requested horizon exceeded the data.
    pub horizon_clamped: bool,
    /// Number of maximal `i`-blocks.
    pub raw_blocks: usize,
    /// Record blocks (strictly increasing lengths).
    pub records: Vec<BlockOut>,
    /// `ν̂` estimate.
    pub nu_hat_est: f64,
    /// `ν` estimate.
    pub nu_est: f64,
    /// Closed records inside the horizon.
    pub k_used: usize,
}

/// Run `exponents`.
pub fn run(cfg: &Config, p: &ExponentsParams) -> Result<Output, CliError> {
    if p.target_i == 0 {
        return Err(CliError::Range("target digit must be at least 1".into()));
    }
    let text = fs::read_to_string(&p.input)?;
    let digits = parse_digits(&text)?;
    let len = digits.len() as u64;
    let seq = DigitSeq::from_digits(digits);
    let bd = decompose(&seq, p.target_i)?;
    let requested = p.n.unwrap_or(len);
    let horizon = requested.min(len);
    let e = exponent_estimates(&bd, horizon)?;
    let result = ExponentsResult {
        digits_read: len,
        horizon,
        horizon_clamped: requested > len,
        raw_blocks: bd.raw_blocks.len(),
        records: bd
            .record_blocks
            .iter()
            .map(|b| BlockOut {
                n: b.n,
                m: b.m,
                len: b.len(),
                open: b.open,
            })
            .collect(),
        nu_hat_est: e.nu_hat_est,
        nu_est: e.nu_est,
        k_used: e.k_used,
    };
    Ok(Output::ok(envelope(cfg, &result)?))
}
