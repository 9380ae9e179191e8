//! `verify`: run a verification suite and emit its report.

use clap::Args;
use serde::{Deserialize, Serialize};

use super::{envelope, Output};
use crate::config::Config;
use crate::error::CliError;
use crate::report::Report;
use crate::verify::{
    anchor_suite, continuant_suite, identity_suite, lemma_suite, mc_nu_zero, mc_runlength, pilot_fixture, run_pilot,
    solver_crosscheck, McConfig, IDENTITY_POINTS,
};

/// Suites: `lemmas`, `continuants`, `anchors`, `identities`, `solver`,
/// `mc-runlength`, `mc-nu-zero`, `pilot` (regenerates the Monte Carlo
/// calibration).
pub const SUITES: [&str; 8] = [
    "lemmas",
    "continuants",
    "anchors",
    "identities",
    "solver",
    "mc-runlength",
    "mc-nu-zero",
    "pilot",
];

/// Parameters of `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Args)]
pub struct VerifyParams {
    /// Suite name.
    #[arg(long)]
    pub suite: String,
    /// Randomized instances of the lemma suite.
    #[arg(long, default_value_t = 10_000)]
    pub instances: usize,
    /// Monte Carlo samples.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Digits per Monte Carlo sample (top horizon).
    #[arg(long, default_value_t = 1_000_000)]
    pub n_digits: u64,
    /// Target digit of the exponent law.
    #[arg(long, default_value_t = 1)]
    pub i: u64,
}

fn merge(name: &str, parts: Vec<Report>) -> Report {
    let mut r = Report::new(name);
    for p in parts {
        for c in p.checks {
            r.push(c);
        }
        for s in p.series {
            r.add_series(s);
        }
    }
    r
}

/// Run `verify`.
pub fn run(cfg: &Config, p: &VerifyParams) -> Result<Output, CliError> {
    let mc = McConfig {
        seed: cfg.globals.seed,
        samples: p.samples,
        n_digits: p.n_digits,
        precision_bits: cfg.globals.precision_bits,
    };
    let report = match p.suite.as_str() {
        "lemmas" => merge("lemmas", vec![lemma_suite(p.instances), continuant_suite()]),
        "continuants" => continuant_suite(),
        "anchors" => anchor_suite()?,
        "identities" => identity_suite(IDENTITY_POINTS)?,
        "solver" => solver_crosscheck(cfg.globals.budget)?,
        "mc-runlength" => mc_runlength(&mc, &pilot_fixture().runlength)?,
        "mc-nu-zero" => {
            let pilot = pilot_fixture().nu_zero;
            mc_nu_zero(&mc, p.i, &pilot)?
        }
        "pilot" => {
            let fixture = run_pilot(&mc)?;
            return Ok(Output::ok(envelope(cfg, &fixture)?));
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown suite {other:?} (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    let passed = report.passed();
    Ok(Output::checked(envelope(cfg, &report)?, passed))
}
