//! `runlength`: the maximal run-length profile `R_n` of a digit file or of
//! a uniformly random point.

use std::fs;

use clap::{ArgGroup, Args};
use serde::{Deserialize, Serialize};

use cfdim_core::mc::{stream_rng, LebesgueDigits};
use cfdim_core::runlength::{ratio_estimates, run_profile, DEFAULT_TAIL_FRACTION};

use super::{envelope, Output};
use crate::config::Config;
use crate::error::CliError;
use crate::formats::parse_digits;

/// Parameters of `runlength` (exactly one source).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "uniform"])))]
pub struct RunlengthParams {
    /// Digit file.
    #[arg(long)]
    pub input: Option<String>,
    /// Number of digits of a uniformly random point (stream 0 of `--seed`).
    #[arg(long)]
    pub uniform: Option<u64>,
    /// Tail fraction of the `R_n/n` window estimates.
    #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
    pub tail_fraction: f64,
}

/// Longest run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunOut {
    /// 1-based start.
    pub start: usize,
    /// Length.
    pub length: usize,
    /// Repeated digit.
    pub digit: u64,
}

/// One point of the profile series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    /// Prefix length.
    pub n: usize,
    /// `R_n`.
    pub r: u32,
    /// `R_n / n`.
    pub r_over_n: f64,
    /// `R_n / log_φ n` (tends to 1/2 for almost every point).
    pub r_over_log_phi_n: f64,
}

/// Result of `runlength`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunlengthResult {
    /// Digits profiled.
    pub n: usize,
    /// `R_n` at the end.
    pub r_final: u32,
    /// A longest run (the first one attaining `R_n`).
    pub longest: Option<RunOut>,
    /// Window estimate of `liminf R_n/n`.
    pub liminf_est: f64,
    /// Window estimate of `limsup R_n/n`.
    pub limsup_est: f64,
    /// Window `[k_min, n]`.
    pub window: (usize, usize),
    /// Profile at `n = 1, 10, 100, …` and at the end.
    pub series: Vec<ProfilePoint>,
}

/// Run `runlength`.
pub fn run(cfg: &Config, p: &RunlengthParams) -> Result<Output, CliError> {
    let digits = match (&p.input, p.uniform) {
        (Some(path), None) => parse_digits(&fs::read_to_string(path)?)?,
        (None, Some(n)) => {
            if n > 1 << 30 {
                return Err(CliError::Range("uniform sample limited to 2^30 digits".into()));
            }
            LebesgueDigits::new(stream_rng(cfg.globals.seed, 0)).take(n as usize).collect()
        }
        _ => return Err(CliError::Parse("exactly one of input, uniform is required".into())),
    };
    if digits.is_empty() {
        return Err(CliError::Range("no digits".into()));
    }
    let rp = run_profile(&digits);
    let est = ratio_estimates(&rp, p.tail_fraction)?;
    let n = rp.n_max;
    let r_final = rp.at(n);
    let longest = rp.blocks.iter().find(|b| b.length as u32 == r_final).map(|b| RunOut {
        start: b.start,
        length: b.length,
        digit: b.digit,
    });
    let ln_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let mut ns = Vec::new();
    let mut x = 1usize;
    while x < n {
        ns.push(x);
        x = x.saturating_mul(10);
    }
    ns.push(n);
    let series = ns
        .into_iter()
        .map(|k| {
            let r = rp.at(k);
            ProfilePoint {
                n: k,
                r,
                r_over_n: r as f64 / k as f64,
                r_over_log_phi_n: if k > 1 { r as f64 * ln_phi / (k as f64).ln() } else { f64::NAN },
            }
        })
        .collect();
    let result = RunlengthResult {
        n,
        r_final,
        longest,
        liminf_est: est.liminf_est,
        limsup_est: est.limsup_est,
        window: est.window,
        series,
    };
    Ok(Output::ok(envelope(cfg, &result)?))
}
