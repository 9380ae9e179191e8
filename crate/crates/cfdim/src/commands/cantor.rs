//! `cantor`: build a Cantor construction, sample its measure, and report
//! local dimensions and exponent estimates of the sampled points.

use std::fs;

use clap::Args;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cfdim_core::cantor::insert::{insert_map, InsertSink};
use cfdim_core::cantor::measure::{ln_interval_length_f64, Measure};
use cfdim_core::cantor::sample::{sample_measure_with, StreamSampler, DEFAULT_TABLE_GRID};
use cfdim_core::cantor::{
    construct_sequences, construct_sequences_infinite, construct_sequences_runlength, CantorError, CantorSpec,
    Recipe, SeqPair,
};
use cfdim_core::exponents::{exponent_estimates, BlockScanner};
use cfdim_core::mc::stream_rng;
use cfdim_core::num::Param;

use super::{envelope, Output};
use crate::config::Config;
use crate::error::CliError;
use crate::formats::{format_digits, ratio_string, Par, Rat};

/// Parameters of `cantor`.
///
/// The construction is chosen by the parameters: `alpha` and `beta` give the
/// run-length schedule; `nu = inf` gives the growing-alphabet variant;
/// otherwise `(nu_hat, nu)` give the finite-exponent schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct CantorParams {
    /// Uniform exponent `ν̂`.
    #[arg(long)]
    pub nu_hat: Option<Rat>,
    /// Asymptotic exponent `ν` (`inf` for the growing-alphabet variant).
    #[arg(long)]
    pub nu: Option<Par>,
    /// Target liminf `α` of `R_n/n` (run-length schedule).
    #[arg(long)]
    pub alpha: Option<Rat>,
    /// Target limsup `β` of `R_n/n` (run-length schedule).
    #[arg(long)]
    pub beta: Option<Rat>,
    /// Alphabet bound `B` of the free digits.
    #[arg(long = "B", default_value_t = 3)]
    pub b: u64,
    /// Run digit `i`.
    #[arg(long, default_value_t = 1)]
    pub i: u64,
    /// Insertion digit `d > B` (default `B + 1`).
    #[arg(long)]
    pub d: Option<u64>,
    /// Depth in segments: prefixes have length `m_k` for `k = depth_k`.
    #[arg(long, default_value_t = 8)]
    pub depth_k: usize,
    /// Number of sampled points.
    #[arg(long, default_value_t = 10)]
    pub sample: usize,
    /// Apply the insertion map to each sample before estimating exponents.
    #[arg(long)]
    pub insert: bool,
    /// Include the sampled digits in the output.
    #[arg(long)]
    pub emit_digits: bool,
    /// Write the first sample (after insertion if requested) to this file.
    #[arg(long)]
    pub digits_out: Option<String>,
    /// Streaming mode: draw each point through the insertion map straight
    /// into the exponent scanner without storing digits (for depths beyond
    /// memory). Local dimensions are not computed in this mode.
    #[arg(long)]
    pub stream: bool,
}

/// A segment of the construction with its exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentOut {
    /// Segment index `k`.
    pub k: usize,
    /// Last position of the previous segment.
    pub start: u64,
    /// Free digits.
    pub free: u64,
    /// Run length.
    pub tail: u64,
    /// Alphabet bound of the free digits.
    pub bound: u64,
    /// Exponent `s̃_k` of the segment measure.
    pub s: f64,
    /// Bracket of `s̃_k`.
    pub s_lo: f64,
    /// Bracket of `s̃_k`.
    pub s_hi: f64,
}

/// Local dimension at a segment end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalDimOut {
    /// Segment index `k`.
    pub k: usize,
    /// Depth `m_k`.
    pub depth: u64,
    /// `log μ(I) / log |I|`.
    pub value: f64,
}

/// Exponent estimates of one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimateOut {
    /// `ν̂` estimate.
    pub nu_hat_est: f64,
    /// `ν` estimate.
    pub nu_est: f64,
    /// Record blocks used.
    pub k_used: usize,
}

/// One sampled point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleOut {
    /// Sample index (random stream index).
    pub index: u64,
    /// Prefix length before insertion.
    pub length: u64,
    /// Length after insertion (when applied).
    pub inserted_length: Option<u64>,
    /// The prefix obeys the construction pattern.
    pub admissible: bool,
    /// `log μ` of the prefix cylinder.
    pub ln_mass: Option<f64>,
    /// Local dimensions at `m_1, …, m_depth`.
    pub local_dimension: Vec<LocalDimOut>,
    /// Exponent estimates of the (inserted) point, if at least two records.
    pub estimates: Option<EstimateOut>,
    /// The digits (when requested).
    pub digits: Option<Vec<u64>>,
}

/// Summary over samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryOut {
    /// Samples drawn.
    pub samples: usize,
    /// Admissible samples.
    pub admissible: usize,
    /// Mean local dimension at the deepest segment end.
    pub mean_local_dimension: Option<f64>,
    /// Mean `ν̂` estimate.
    pub mean_nu_hat_est: Option<f64>,
    /// Mean `ν` estimate.
    pub mean_nu_est: Option<f64>,
}

/// Result of `cantor`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CantorResult {
    /// Construction used.
    pub recipe: String,
    /// `n_1, n_2, …`.
    pub n: Vec<u64>,
    /// `m_1, m_2, …`.
    pub m: Vec<u64>,
    /// Growing alphabet bounds, if any.
    pub bounds: Option<Vec<u64>>,
    /// Alphabet bound (fixed-alphabet variants).
    pub b: u64,
    /// Run digit.
    pub i: u64,
    /// Insertion digit (0 when not applicable).
    pub d: u64,
    /// Prefix depth `m_{depth_k}`.
    pub depth: u64,
    /// Segments with their exponents.
    pub segments: Vec<SegmentOut>,
    /// Sampled points.
    pub samples: Vec<SampleOut>,
    /// Summary.
    pub summary: SummaryOut,
}

fn recipe_name(r: &Recipe) -> String {
    match r {
        Recipe::Exponents { nu_hat, nu } => format!("exponents nu_hat={} nu={}", ratio_string(nu_hat), ratio_string(nu)),
        Recipe::ExponentsZero { nu } => format!("exponents nu_hat=0 nu={}", ratio_string(nu)),
        Recipe::Infinite { nu_hat } => format!("growing_alphabet nu_hat={} nu=inf", ratio_string(nu_hat)),
        Recipe::InfiniteZero => "growing_alphabet nu_hat=0 nu=inf".into(),
        Recipe::InfiniteOne => "growing_alphabet nu_hat=1 nu=inf".into(),
        Recipe::RunLength { alpha, beta } => format!("runlength alpha={} beta={}", ratio_string(alpha), ratio_string(beta)),
    }
}

/// Build the spec described by the parameters.
pub fn build_spec(p: &CantorParams) -> Result<CantorSpec, CliError> {
    let terms = p.depth_k + 2;
    if p.depth_k == 0 {
        return Err(CliError::Range("depth_k must be at least 1".into()));
    }
    let d = p.d.unwrap_or(p.b + 1);
    let spec = match (&p.alpha, &p.beta) {
        (Some(a), Some(b)) => CantorSpec::new(construct_sequences_runlength(&a.0, &b.0, terms)?, p.b, p.i, d)?,
        (None, None) => {
            let nu_hat = p
                .nu_hat
                .as_ref()
                .ok_or_else(|| CliError::Range("missing parameter nu_hat".into()))?;
            match p.nu.as_ref().map(|x| &x.0) {
                Some(Param::Infinite) => CantorSpec::infinite(construct_sequences_infinite(&nu_hat.0, terms)?, p.i)?,
                Some(Param::Finite(nu)) => CantorSpec::new(construct_sequences(&nu_hat.0, nu, terms)?, p.b, p.i, d)?,
                None => return Err(CliError::Range("missing parameter nu".into())),
            }
        }
        _ => return Err(CliError::Range("alpha and beta must be given together".into())),
    };
    if spec.segments() < p.depth_k {
        return Err(CantorError::BeyondSequence(spec.seq.m.last().copied().unwrap_or(0)).into());
    }
    Ok(spec)
}

fn estimates_of(digits: impl IntoIterator<Item = u64>, i: u64) -> Option<EstimateOut> {
    let mut sc = BlockScanner::new(i, false);
    for a in digits {
        sc.push(a);
    }
    estimates_from_scanner(sc)
}

fn estimates_from_scanner(sc: BlockScanner) -> Option<EstimateOut> {
    let len = sc.position();
    let bd = sc.finish(false);
    exponent_estimates(&bd, len).ok().map(|e| EstimateOut {
        nu_hat_est: e.nu_hat_est,
        nu_est: e.nu_est,
        k_used: e.k_used,
    })
}

fn sample_point(measure: &Measure, p: &CantorParams, seed: u64, index: u64) -> Result<(SampleOut, Vec<u64>), CliError> {
    let spec = measure.spec();
    let depth = spec.seq.m[p.depth_k - 1];
    let mut rng = stream_rng(seed, index);
    let digits = sample_measure_with(measure, depth, &mut rng)?;
    let admissible = spec.check_prefix(&digits).is_ok();
    let mut cursor = measure.cursor();
    let mut local = Vec::with_capacity(p.depth_k);
    let mut pos = 0usize;
    for k in 1..=p.depth_k {
        let mk = spec.seq.m[k - 1] as usize;
        for &a in &digits[pos..mk] {
            cursor.push(a)?;
        }
        pos = mk;
        local.push(LocalDimOut {
            k,
            depth: mk as u64,
            value: cursor.ln_mass() / ln_interval_length_f64(&digits[..mk]),
        });
    }
    let (mapped, inserted_length) = if p.insert {
        let f = insert_map(spec, &digits)?;
        let n = f.digits.len() as u64;
        (f.digits, Some(n))
    } else {
        (digits.clone(), None)
    };
    let estimates = estimates_of(mapped.iter().copied(), spec.i);
    let out = SampleOut {
        index,
        length: depth,
        inserted_length,
        admissible,
        ln_mass: Some(cursor.ln_mass()),
        local_dimension: local,
        estimates,
        digits: p.emit_digits.then(|| mapped.clone()),
    };
    Ok((out, mapped))
}

fn stream_point(sampler: &StreamSampler<'_>, measure: &Measure, p: &CantorParams, seed: u64, index: u64) -> Result<SampleOut, CliError> {
    let spec = measure.spec();
    let mut rng = stream_rng(seed, index);
    let scanner = BlockScanner::new(spec.i, false);
    let (length, inserted_length, scanner) = if p.insert {
        let mut sink = InsertSink::new(spec, scanner, false);
        let n = sampler.run(&mut rng, p.depth_k, &mut sink)?;
        let out = sink.output_len();
        (n, Some(out), sink.into_parts().0)
    } else {
        let mut sc = scanner;
        let n = sampler.run(&mut rng, p.depth_k, &mut sc)?;
        (n, None, sc)
    };
    Ok(SampleOut {
        index,
        length,
        inserted_length,
        admissible: true,
        ln_mass: None,
        local_dimension: Vec::new(),
        estimates: estimates_from_scanner(scanner),
        digits: None,
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

/// Run `cantor`.
pub fn run(cfg: &Config, p: &CantorParams) -> Result<Output, CliError> {
    if p.stream && (p.emit_digits || p.digits_out.is_some()) {
        return Err(CliError::Range("streaming mode does not store digits".into()));
    }
    let spec = build_spec(p)?;
    if p.insert && spec.is_infinite() {
        return Err(CliError::Range("the insertion map applies to the fixed-alphabet constructions".into()));
    }
    let measure = Measure::new(spec, p.depth_k)?;
    let spec = measure.spec();
    let seed = cfg.globals.seed;
    let (samples, first): (Vec<SampleOut>, Option<Vec<u64>>) = if p.stream {
        let sampler = StreamSampler::new(&measure, DEFAULT_TABLE_GRID);
        let s = (0..p.sample as u64)
            .into_par_iter()
            .map(|j| stream_point(&sampler, &measure, p, seed, j))
            .collect::<Result<Vec<_>, _>>()?;
        (s, None)
    } else {
        let pairs = (0..p.sample as u64)
            .into_par_iter()
            .map(|j| sample_point(&measure, p, seed, j))
            .collect::<Result<Vec<_>, _>>()?;
        let mut first = None;
        let mut s = Vec::with_capacity(pairs.len());
        for (o, d) in pairs {
            if first.is_none() {
                first = Some(d);
            }
            s.push(o);
        }
        (s, first)
    };
    if let Some(path) = &p.digits_out {
        let d = first.ok_or_else(|| CliError::Range("no sample to write".into()))?;
        fs::write(path, format_digits(&d))?;
    }
    let segments = (1..=measure.segments())
        .map(|k| {
            let kn = measure.kernel(k);
            SegmentOut {
                k,
                start: kn.seg.start,
                free: kn.seg.free,
                tail: kn.seg.tail,
                bound: kn.seg.bound,
                s: kn.s,
                s_lo: kn.s_bracket.0,
                s_hi: kn.s_bracket.1,
            }
        })
        .collect();
    let summary = SummaryOut {
        samples: samples.len(),
        admissible: samples.iter().filter(|s| s.admissible).count(),
        mean_local_dimension: mean(samples.iter().filter_map(|s| s.local_dimension.last().map(|l| l.value))),
        mean_nu_hat_est: mean(samples.iter().filter_map(|s| s.estimates.map(|e| e.nu_hat_est))),
        mean_nu_est: mean(samples.iter().filter_map(|s| s.estimates.map(|e| e.nu_est))),
    };
    let seq: &SeqPair = &spec.seq;
    let result = CantorResult {
        recipe: recipe_name(&seq.recipe),
        n: seq.n.clone(),
        m: seq.m.clone(),
        bounds: seq.bounds.clone(),
        b: if spec.is_infinite() { 0 } else { spec.b },
        i: spec.i,
        d: spec.d,
        depth: seq.m[p.depth_k - 1],
        segments,
        samples,
        summary,
    };
    Ok(Output::ok(envelope(cfg, &result)?))
}

/// The argument `ν²/((1+ν)(ν−ν̂))` of the pressure root governing the
/// construction's dimension.
pub fn construction_argument(nu_hat: &BigRational, nu: &BigRational) -> BigRational {
    let one = BigRational::from_integer(1.into());
    nu * nu / ((&one + nu) * (nu - nu_hat))
}
