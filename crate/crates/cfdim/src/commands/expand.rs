//! `expand`: certified partial quotients, convergents and cylinder intervals.

use std::str::FromStr;

use clap::{ArgGroup, Args};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use cfdim_core::cf::{continuants, expand, RealInput, SeqEnd};
use cfdim_core::num::{ln_biguint, ratio_to_f64};

use super::{envelope, Output};
use crate::config::Config;
use crate::error::CliError;
use crate::formats::{big_string, ratio_string};

/// Parameters of `expand` (exactly one input).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["rational", "surd", "decimal", "target"])))]
pub struct ExpandParams {
    /// Rational `p/q` with `0 < p < q`.
    #[arg(long)]
    pub rational: Option<String>,
    /// Quadratic surd: `d` for the fractional part of `√d`, or
    /// `d,u,v,w` (optionally prefixed `sqrt:`) for `(u + v√d)/w`.
    #[arg(long)]
    pub surd: Option<String>,
    /// Decimal literal, known to `--precision-bits` bits.
    #[arg(long)]
    pub decimal: Option<String>,
    /// The fixed point `[i, i, …]` for digit `i`.
    #[arg(long)]
    pub target: Option<u64>,
    /// Number of digits requested.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Number of convergent/interval rows emitted.
    #[arg(long, default_value_t = 64)]
    pub table: usize,
}

/// One row of the convergent table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    /// Order `k`.
    pub k: usize,
    /// Partial quotient `a_k`.
    pub a: u64,
    /// Numerator `p_k`.
    pub p: String,
    /// Denominator `q_k`.
    pub q: String,
    /// Left endpoint of `I_k`.
    pub left: String,
    /// Right endpoint of `I_k`.
    pub right: String,
    /// Exact `|I_k| = 1/(q_k(q_k + q_{k−1}))`.
    pub length: String,
    /// `|I_k|` as a float (0 on underflow).
    pub length_f64: f64,
    /// `ln |I_k|`.
    pub ln_length: f64,
}

/// Result of `expand`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpandResult {
    /// Normalized description of the input.
    pub input: String,
    /// Certified digits.
    pub digits: Vec<u64>,
    /// Number of certified digits.
    pub count: usize,
    /// `open`, `terminated` (rational) or `uncertified` (out of precision).
    pub end: &'static str,
    /// True when fewer digits than requested exist or are certified.
    pub exhausted: bool,
    /// Convergents and cylinder intervals for the first `table` orders.
    pub table: Vec<Row>,
}

fn parse_big<T: FromStr>(s: &str, what: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Parse(format!("malformed {what}: {s:?}")))
}

fn parse_input(p: &ExpandParams, bits: u32) -> Result<(RealInput, String), CliError> {
    let given = [p.rational.is_some(), p.surd.is_some(), p.decimal.is_some(), p.target.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(CliError::Parse("exactly one of rational, surd, decimal, target is required".into()));
    }
    if let Some(s) = &p.rational {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| CliError::Parse(format!("rational must be p/q: {s:?}")))?;
        let num: BigUint = parse_big(a, "numerator")?;
        let den: BigUint = parse_big(b, "denominator")?;
        if den.is_zero() {
            return Err(CliError::Parse("zero denominator".into()));
        }
        let desc = format!("rational {num}/{den}");
        return Ok((RealInput::Rational { p: num, q: den }, desc));
    }
    if let Some(s) = &p.surd {
        let body = s.trim().strip_prefix("sqrt:").unwrap_or(s.trim());
        let parts: Vec<&str> = body.split(',').collect();
        let d: BigUint = parse_big(parts[0], "radicand")?;
        let (u, v, w) = match parts.len() {
            1 => (-BigInt::from(d.sqrt()), BigInt::from(1), BigInt::from(1)),
            4 => (parse_big(parts[1], "u")?, parse_big(parts[2], "v")?, parse_big(parts[3], "w")?),
            _ => return Err(CliError::Parse(format!("surd must be d or d,u,v,w: {s:?}"))),
        };
        let desc = format!("surd ({u} + {v}*sqrt({d}))/{w}");
        return Ok((RealInput::Surd { u, v, w, d }, desc));
    }
    if let Some(s) = &p.decimal {
        let x = RealInput::decimal(s, bits)?;
        return Ok((x, format!("decimal {} +- 2^-{bits}", s.trim())));
    }
    let i = p.target.expect("one input is present");
    if i == 0 {
        return Err(CliError::Range("target digit must be at least 1".into()));
    }
    Ok((RealInput::quadratic_target(i), format!("target [{i}, {i}, ...]")))
}

/// Run `expand`.
pub fn run(cfg: &Config, p: &ExpandParams) -> Result<Output, CliError> {
    let (x, input) = parse_input(p, cfg.globals.precision_bits)?;
    let seq = expand(&x, p.n)?;
    let t = continuants(&seq.digits);
    let rows = seq.len().min(p.table);
    let mut table = Vec::with_capacity(rows);
    for k in 1..=rows as isize {
        let (pk, qk, pk1, qk1) = (t.p(k), t.q(k), t.p(k - 1), t.q(k - 1));
        let a = BigRational::new(pk.clone().into(), qk.clone().into());
        let b = BigRational::new((pk + pk1).into(), (qk + qk1).into());
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        let den = qk * (qk + qk1);
        let length = BigRational::new(1.into(), den.clone().into());
        table.push(Row {
            k: k as usize,
            a: seq.digits[k as usize - 1],
            p: big_string(pk),
            q: big_string(qk),
            left: ratio_string(&left),
            right: ratio_string(&right),
            length: ratio_string(&length),
            length_f64: ratio_to_f64(&length),
            ln_length: -ln_biguint(&den),
        });
    }
    let end = match seq.end {
        SeqEnd::Open => "open",
        SeqEnd::Terminated => "terminated",
        SeqEnd::Uncertified => "uncertified",
    };
    let result = ExpandResult {
        input,
        count: seq.len(),
        exhausted: seq.exhausted() || seq.len() < p.n,
        digits: seq.digits,
        end,
        table,
    };
    Ok(Output::ok(envelope(cfg, &result)?))
}
