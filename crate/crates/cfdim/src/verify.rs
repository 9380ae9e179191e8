//! Verification suites: Monte Carlo almost-everywhere laws, exact lemma
//! checks, and cross-validation of the two dimension solvers.
//!
//! Every suite is deterministic given its configuration: Monte Carlo samples
//! use per-sample random streams derived from `(seed, index)` and results
//! are collected in index order, so they do not depend on the thread count.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand_core::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use cfdim_core::cf::{basic_interval, continuants, run_continuant, run_continuant_closed_form, target};
use cfdim_core::dim::{
    dim_limit, spectral_dim, theorem_argument, theorem_dims, Alphabet, PredimKind, TheoremKind, TheoremParams,
    DEFAULT_BUDGET,
};
use cfdim_core::num::{ratio_to_f64, Param};
use cfdim_core::exponents::{estimates_from_records, BlockScanner};
use cfdim_core::mc::{stream_rng, LebesgueDigits};

use crate::error::CliError;
use crate::report::{Check, Report, Series};

/// Monte Carlo configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    /// Master seed.
    pub seed: u64,
    /// Number of sampled points.
    pub samples: usize,
    /// Digits per point (the top horizon).
    pub n_digits: u64,
    /// Recorded for reproducibility. Digits are drawn from the exact
    /// conditional law of a uniform point, so no precision budget is
    /// consumed and no sample is ever redrawn.
    pub precision_bits: u32,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            seed: 1,
            samples: 200,
            n_digits: 1_000_000,
            precision_bits: 256,
        }
    }
}

impl McConfig {
    /// Decade horizons `10^4, 10^5, …` up to `n_digits` (always including
    /// `n_digits`).
    pub fn horizons(&self) -> Vec<u64> {
        let mut h = Vec::new();
        let mut x = 10_000u64;
        while x < self.n_digits {
            h.push(x);
            x = x.saturating_mul(10);
        }
        h.push(self.n_digits);
        h
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.samples == 0 {
            return Err(CliError::Range("samples must be at least 1".into()));
        }
        if self.n_digits < 10_000 {
            return Err(CliError::Range("n_digits must be at least 10^4".into()));
        }
        Ok(())
    }
}

/// Bounds calibrated by the committed pilot run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PilotFixture {
    /// Schema tag.
    pub schema: String,
    /// Configuration of the pilot run.
    pub config: McConfig,
    /// Run-length law.
    pub runlength: PilotRunlength,
    /// Asymptotic-exponent law.
    pub nu_zero: PilotNuZero,
}

/// Pilot data and bounds of [`mc_runlength`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PilotRunlength {
    /// Horizons of the pilot.
    pub horizons: Vec<u64>,
    /// Pilot means of `R_n / log_φ n`.
    pub means: Vec<f64>,
    /// Pilot standard deviations.
    pub sds: Vec<f64>,
    /// Accepted range of the mean at the top horizon.
    pub mean_bounds: [f64; 2],
    /// Allowed decrease of the mean between consecutive horizons.
    pub trend_slack: f64,
}

/// Pilot data and bounds of [`mc_nu_zero`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PilotNuZero {
    /// Target digit of the pilot.
    pub i: u64,
    /// Exceedance threshold on `ν_est`.
    pub threshold: f64,
    /// Horizons of the pilot.
    pub horizons: Vec<u64>,
    /// Pilot exceedance fractions.
    pub fractions: Vec<f64>,
    /// Largest accepted fraction at the top horizon.
    pub max_fraction: f64,
}

/// Schema tag of the pilot fixture.
pub const PILOT_SCHEMA: &str = "cfdim/pilot/v1";

/// The committed pilot fixture.
///
/// The fixture is the complete output of `cfdim verify --suite pilot`; its
/// `result` member holds the calibration.
pub fn pilot_fixture() -> PilotFixture {
    parse_pilot(include_str!("../fixtures/pilot.json")).expect("committed pilot fixture is valid")
}

/// Parse a pilot fixture from a command output or a bare calibration.
pub fn parse_pilot(text: &str) -> Result<PilotFixture, CliError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let inner = match v.get("result") {
        Some(r) => r.clone(),
        None => v,
    };
    Ok(serde_json::from_value(inner)?)
}

/// `ln φ` with `φ` the golden ratio.
fn ln_phi() -> f64 {
    ((1.0 + 5f64.sqrt()) / 2.0).ln()
}

/// `R_n / log_φ n` at each horizon for one uniform point.
pub fn runlength_statistics(seed: u64, index: u64, horizons: &[u64]) -> Vec<f64> {
    let mut it = LebesgueDigits::new(stream_rng(seed, index));
    let (mut best, mut cur, mut prev) = (0u64, 0u64, 0u64);
    let mut out = Vec::with_capacity(horizons.len());
    let mut n = 0u64;
    for &h in horizons {
        while n < h {
            let a = it.next_digit();
            cur = if a == prev { cur + 1 } else { 1 };
            prev = a;
            best = best.max(cur);
            n += 1;
        }
        out.push(best as f64 * ln_phi() / (h as f64).ln());
    }
    out
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = if xs.len() > 1 {
        xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, v.sqrt())
}

/// Column means and standard deviations of per-sample rows.
fn column_stats(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let k = rows.first().map_or(0, Vec::len);
    (0..k)
        .map(|j| mean_sd(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .unzip()
}

/// The run-length law `R_n / log_φ n → 1/2` for Lebesgue-almost every `x`.
pub fn mc_runlength(cfg: &McConfig, pilot: &PilotRunlength) -> Result<Report, CliError> {
    cfg.validate()?;
    let horizons = cfg.horizons();
    let rows: Vec<Vec<f64>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|k| runlength_statistics(cfg.seed, k, &horizons))
        .collect();
    let (means, sds) = column_stats(&rows);
    let mut rep = Report::new("mc_runlength");
    let top = *means.last().expect("at least one horizon");
    rep.push(Check::within("mean_at_top_horizon", top, Some(pilot.mean_bounds[0]), Some(pilot.mean_bounds[1])));
    let worst_drop = means.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
    if means.len() > 1 {
        rep.push(Check::within("largest_mean_decrease_along_horizons", worst_drop, None, Some(pilot.trend_slack)));
    }
    rep.push(Check::zero_failures("redraws", 0));
    rep.add_series(Series {
        name: "mean_by_horizon".into(),
        columns: vec!["n".into(), "mean".into(), "sd".into()],
        rows: horizons
            .iter()
            .zip(means.iter().zip(&sds))
            .map(|(&h, (&m, &s))| vec![h as f64, m, s])
            .collect(),
    });
    Ok(rep)
}

/// Per-horizon `(ν̂_est, ν_est)` of one uniform point (`None` when fewer
/// than two record blocks are available).
pub fn nu_statistics(seed: u64, index: u64, i: u64, horizons: &[u64]) -> Vec<Option<(f64, f64)>> {
    let mut it = LebesgueDigits::new(stream_rng(seed, index));
    let mut sc = BlockScanner::new(i, false);
    let top = *horizons.last().unwrap_or(&0);
    for _ in 0..top {
        sc.push(it.next_digit());
    }
    horizons
        .iter()
        .map(|&h| {
            let recs: Vec<_> = sc.records().iter().copied().filter(|b| b.m <= h).collect();
            estimates_from_records(&recs).ok().map(|e| (e.nu_hat_est, e.nu_est))
        })
        .collect()
}

/// The law `ν(x) = 0` for Lebesgue-almost every `x`.
pub fn mc_nu_zero(cfg: &McConfig, i: u64, pilot: &PilotNuZero) -> Result<Report, CliError> {
    cfg.validate()?;
    if i == 0 {
        return Err(CliError::Range("target digit must be at least 1".into()));
    }
    let horizons = cfg.horizons();
    let rows: Vec<Vec<Option<(f64, f64)>>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|k| nu_statistics(cfg.seed, k, i, &horizons))
        .collect();
    let mut fractions = Vec::with_capacity(horizons.len());
    let mut insufficient = Vec::with_capacity(horizons.len());
    let mut order_violations = 0u64;
    for j in 0..horizons.len() {
        let mut exceed = 0usize;
        let mut missing = 0usize;
        for r in &rows {
            match r[j] {
                Some((nh, nu)) => {
                    if nu > pilot.threshold {
                        exceed += 1;
                    }
                    if nh > nu {
                        order_violations += 1;
                    }
                }
                None => missing += 1,
            }
        }
        fractions.push(exceed as f64 / rows.len() as f64);
        insufficient.push(missing as f64);
    }
    let mut rep = Report::new("mc_nu_zero");
    let top = *fractions.last().expect("at least one horizon");
    rep.push(Check::within("exceedance_fraction_at_top_horizon", top, None, Some(pilot.max_fraction)));
    let worst_rise = fractions.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    rep.push(Check::within("largest_fraction_increase_along_horizons", worst_rise, None, Some(0.0)));
    rep.push(Check::zero_failures("nu_hat_exceeds_nu", order_violations));
    rep.add_series(Series {
        name: "exceedance_by_horizon".into(),
        columns: vec!["n".into(), "fraction".into(), "insufficient_blocks".into()],
        rows: horizons
            .iter()
            .zip(fractions.iter().zip(&insufficient))
            .map(|(&h, (&f, &m))| vec![h as f64, f, m])
            .collect(),
    });
    Ok(rep)
}

/// Run the pilot that calibrates the Monte Carlo bounds; the accepted bounds
/// are fixed constants checked against the pilot statistics.
pub fn run_pilot(cfg: &McConfig) -> Result<PilotFixture, CliError> {
    cfg.validate()?;
    let horizons = cfg.horizons();
    let rl: Vec<Vec<f64>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|k| runlength_statistics(cfg.seed, k, &horizons))
        .collect();
    let (means, sds) = column_stats(&rl);
    let nz: Vec<Vec<Option<(f64, f64)>>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|k| nu_statistics(cfg.seed, k, 1, &horizons))
        .collect();
    let threshold = 0.05;
    let fractions = (0..horizons.len())
        .map(|j| nz.iter().filter(|r| matches!(r[j], Some((_, nu)) if nu > threshold)).count() as f64 / nz.len() as f64)
        .collect();
    Ok(PilotFixture {
        schema: PILOT_SCHEMA.into(),
        config: cfg.clone(),
        runlength: PilotRunlength {
            horizons: horizons.clone(),
            means,
            sds,
            mean_bounds: [0.40, 0.60],
            trend_slack: 0.05,
        },
        nu_zero: PilotNuZero {
            i: 1,
            threshold,
            horizons,
            fractions,
            max_fraction: 0.02,
        },
    })
}

/// Deterministic random digit strings for the lemma suite.
struct Strings {
    rng: rand_chacha::ChaCha8Rng,
}

impl Strings {
    fn new(seed: u64) -> Self {
        Strings { rng: stream_rng(seed, 0) }
    }

    fn below(&mut self, n: u64) -> u64 {
        self.rng.next_u64() % n
    }

    fn string(&mut self, max_len: u64, max_digit: u64) -> Vec<u64> {
        let len = 1 + self.below(max_len);
        (0..len).map(|_| 1 + self.below(max_digit)).collect()
    }
}

fn q_of(d: &[u64]) -> BigUint {
    continuants(d).q(d.len() as isize).clone()
}

/// Seed of the randomized lemma instances.
pub const LEMMA_SEED: u64 = 0x1e33a;

/// Exact checks of the continuant and cylinder lemmas.
pub fn lemma_suite(instances: usize) -> Report {
    let mut rep = Report::new("lemmas");
    let mut gen = Strings::new(LEMMA_SEED);
    let (mut prod_fail, mut pow_fail, mut split_fail, mut det_fail, mut len_fail, mut bound_fail) = (0, 0, 0, 0, 0, 0);
    for _ in 0..instances {
        let d = gen.string(30, 10);
        let n = d.len();
        let t = continuants(&d);
        let q = t.q(n as isize).clone();
        let lo: BigUint = d.iter().map(|&a| BigUint::from(a)).product();
        let hi: BigUint = d.iter().map(|&a| BigUint::from(a + 1)).product();
        if !(lo <= q && q <= hi) {
            prod_fail += 1;
        }
        if &q * &q < BigUint::from(2u32).pow(n as u32 - 1) {
            pow_fail += 1;
        }
        if n >= 2 {
            let cut = 1 + gen.below(n as u64 - 1) as usize;
            let prod = q_of(&d[..cut]) * q_of(&d[cut..]);
            if !(prod <= q && q <= BigUint::from(2u32) * &prod) {
                split_fail += 1;
            }
        }
        for k in 0..=n as isize {
            let a = t.p(k) * t.q(k - 1);
            let b = t.p(k - 1) * t.q(k);
            let diff = if a > b { a - b } else { b - a };
            if !diff.is_one() {
                det_fail += 1;
            }
        }
        let iv = basic_interval(&d);
        if &iv.right - &iv.left != iv.length {
            len_fail += 1;
        }
        let qr = BigRational::from_integer(q.clone().into());
        let q2 = &qr * &qr;
        let two = BigRational::from_integer(2.into());
        if iv.length < (&two * &q2).recip() || iv.length > q2.recip() {
            bound_fail += 1;
        }
    }
    rep.push(Check::zero_failures("product_bounds", prod_fail));
    rep.push(Check::zero_failures("power_of_two_lower_bound", pow_fail));
    rep.push(Check::zero_failures("split_ratio_in_1_2", split_fail));
    rep.push(Check::zero_failures("determinant_identity", det_fail));
    rep.push(Check::zero_failures("length_equals_endpoint_difference", len_fail));
    rep.push(Check::zero_failures("length_two_sided_bound", bound_fail));

    // Exhaustive strings n ≤ 6 over {1..4}: nesting, disjointness, order.
    let (mut nest_fail, mut order_fail, mut exhaustive) = (0u64, 0u64, 0u64);
    let mut stack: Vec<Vec<u64>> = (1..=4).map(|a| vec![a]).collect();
    stack.push(Vec::new());
    while let Some(d) = stack.pop() {
        exhaustive += 1;
        let parent = basic_interval(&d);
        let kids: Vec<_> = (1..=4u64)
            .map(|a| {
                let mut e = d.clone();
                e.push(a);
                basic_interval(&e)
            })
            .collect();
        for k in &kids {
            if k.left < parent.left || k.right > parent.right {
                nest_fail += 1;
            }
        }
        // Larger digits move left at odd order n+1 and right at even order.
        let odd = (d.len() + 1) % 2 == 1;
        for w in kids.windows(2) {
            let ok = if odd { w[1].right <= w[0].left } else { w[0].right <= w[1].left };
            if !ok {
                order_fail += 1;
            }
        }
        if d.len() < 5 {
            for a in 1..=4 {
                let mut e = d.clone();
                e.push(a);
                stack.push(e);
            }
        }
    }
    rep.push(Check::zero_failures("nesting_exhaustive_n_le_6_b_le_4", nest_fail));
    rep.push(Check::zero_failures("parity_ordering_exhaustive_n_le_6_b_le_4", order_fail));
    rep.push(Check::within("exhaustive_strings_checked", exhaustive as f64, Some(1365.0), None));

    // All-ones strings give Fibonacci continuants.
    let (mut fib_fail, mut fib_bound_fail) = (0u64, 0u64);
    let (mut f0, mut f1) = (BigUint::one(), BigUint::one());
    for n in 1..=90usize {
        let q = q_of(&vec![1; n]);
        let next = &f0 + &f1;
        f0 = f1;
        f1 = next;
        if q != f0 {
            fib_fail += 1;
        }
        if &q * &q < BigUint::from(2u32).pow(n as u32 - 1) {
            fib_bound_fail += 1;
        }
    }
    rep.push(Check::zero_failures("all_ones_fibonacci", fib_fail));
    rep.push(Check::zero_failures("all_ones_power_bound", fib_bound_fail));
    rep
}

/// Closed-form run continuants and the `τ`-power bounds
/// `τ^n/2 ≤ q_n(i,…,i) ≤ 2τ^n`, exactly, for `i ≤ 5`, `n ≤ 40`.
pub fn continuant_suite() -> Report {
    let mut rep = Report::new("run_continuants");
    let (mut closed_fail, mut lower_fail, mut upper_fail) = (0u64, 0u64, 0u64);
    for i in 1..=5u64 {
        let t = target(i);
        let p = t.prec_bits as usize;
        let tf = &t.tau_fixed;
        let tf1 = tf + 1u32;
        for n in 0..=40usize {
            let q = run_continuant(i, n);
            if q != run_continuant_closed_form(i, n) {
                closed_fail += 1;
            }
            let scaled = &q << (p * n);
            // τ ≤ (tf+1)/2^p, so (tf+1)^n ≤ 2 q 2^{pn} certifies τ^n/2 ≤ q.
            if tf1.pow(n as u32) > BigUint::from(2u32) * &scaled {
                lower_fail += 1;
            }
            // τ ≥ tf/2^p, so q 2^{pn} ≤ 2 tf^n certifies q ≤ 2τ^n.
            if scaled > BigUint::from(2u32) * tf.pow(n as u32) {
                upper_fail += 1;
            }
        }
    }
    rep.push(Check::zero_failures("closed_form_equals_recursion", closed_fail));
    rep.push(Check::zero_failures("tau_power_lower_bound", lower_fail));
    rep.push(Check::zero_failures("tau_power_upper_bound", upper_fail));
    rep
}

/// The constant branches and conventions of the dimension formulas.
pub fn anchor_suite() -> Result<Report, CliError> {
    let mut rep = Report::new("anchors");
    let r = |p: i64, q: i64| Param::ratio(p, q);
    let q = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let mut cases: Vec<(&str, TheoremKind, TheoremParams, f64)> = Vec::new();
    let tp = |kind, nh: Option<Param>, nu: Option<Param>, a: Option<BigRational>, b: Option<BigRational>| {
        let mut t = TheoremParams::new(1);
        t.nu_hat = nh;
        t.nu = nu;
        t.alpha = a;
        t.beta = b;
        (kind, t)
    };
    let push = |c: &mut Vec<(&str, TheoremKind, TheoremParams, f64)>, name, (k, t), v| c.push((name, k, t, v));
    push(&mut cases, "e_hat_nu_hat_0_is_1", tp(TheoremKind::EHat, Some(r(0, 1)), None, None, None), 1.0);
    push(&mut cases, "e_hat_nu_hat_1_is_half", tp(TheoremKind::EHat, Some(r(1, 1)), None, None, None), 0.5);
    push(&mut cases, "u_set_nu_hat_0_is_1", tp(TheoremKind::USet, Some(r(0, 1)), None, None, None), 1.0);
    push(&mut cases, "u_set_nu_hat_1_is_half", tp(TheoremKind::USet, Some(r(1, 1)), None, None, None), 0.5);
    push(&mut cases, "f_alpha_0_is_1", tp(TheoremKind::F, None, None, Some(q(0, 1)), None), 1.0);
    push(&mut cases, "f_alpha_half_is_half", tp(TheoremKind::F, None, None, Some(q(1, 2)), None), 0.5);
    push(&mut cases, "e_joint_nu_0_is_1", tp(TheoremKind::EJoint, Some(r(0, 1)), Some(r(0, 1)), None, None), 1.0);
    push(&mut cases, "fg_beta_0_is_1", tp(TheoremKind::FG, None, None, Some(q(0, 1)), Some(q(0, 1))), 1.0);
    push(&mut cases, "u_set_nu_hat_above_1_is_0", tp(TheoremKind::USet, Some(r(2, 1)), None, None, None), 0.0);
    push(&mut cases, "u_set_nu_hat_inf_is_0", tp(TheoremKind::USet, Some(Param::Infinite), None, None, None), 0.0);
    push(&mut cases, "e_hat_nu_hat_above_1_is_0", tp(TheoremKind::EHat, Some(r(3, 2)), None, None, None), 0.0);
    push(&mut cases, "e_hat_nu_hat_inf_is_0", tp(TheoremKind::EHat, Some(Param::Infinite), None, None, None), 0.0);
    push(&mut cases, "e_joint_outside_is_0", tp(TheoremKind::EJoint, Some(r(1, 2)), Some(r(1, 2)), None, None), 0.0);
    push(&mut cases, "e_joint_nu_inf_nu_hat_above_1_is_0", tp(TheoremKind::EJoint, Some(r(2, 1)), Some(Param::Infinite), None, None), 0.0);
    push(&mut cases, "fg_outside_is_0", tp(TheoremKind::FG, None, None, Some(q(1, 2)), Some(q(1, 2))), 0.0);
    push(&mut cases, "f_alpha_above_half_is_0", tp(TheoremKind::F, None, None, Some(q(3, 4)), None), 0.0);
    for (name, kind, params, want) in cases {
        // Anchors are exact values; the finite-B trend trace is not needed.
        let got = theorem_dims(kind, &params, &[])?.estimate.value;
        rep.push(Check::within(name, got, Some(want), Some(want)));
    }
    Ok(rep)
}

/// Number of grid points of [`identity_suite`].
pub const IDENTITY_POINTS: u64 = 1000;
/// Tolerance of the floating-point identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// The optimizing identities: `4ν̂/(1+ν̂)² = ν²/((1+ν)(ν−ν̂))` at
/// `ν = 2ν̂/(1−ν̂)`, and `4α(1−α) = β²(1−α)/(β−α)` at `β = 2α`, checked
/// exactly through the formula arguments and in floating point.
pub fn identity_suite(points: u64) -> Result<Report, CliError> {
    let mut rep = Report::new("identities");
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let (mut exact_nu, mut exact_rl) = (0u64, 0u64);
    let (mut worst_nu, mut worst_rl) = (0.0f64, 0.0f64);
    for j in 1..=points {
        let nh = BigRational::new((j as i64).into(), (points as i64 + 1).into());
        let nu = &two * &nh / (&one - &nh);
        let mut a = TheoremParams::new(1);
        a.nu_hat = Some(Param::Finite(nh.clone()));
        let mut b = a.clone();
        b.nu = Some(Param::Finite(nu.clone()));
        let (_, ah) = theorem_argument(TheoremKind::EHat, &a)?;
        let (_, aj) = theorem_argument(TheoremKind::EJoint, &b)?;
        if ah.is_none() || ah != aj {
            exact_nu += 1;
        }
        let (x, y) = (ratio_to_f64(&nh), ratio_to_f64(&nu));
        let lhs = 4.0 * x / ((1.0 + x) * (1.0 + x));
        let rhs = y * y / ((1.0 + y) * (y - x));
        worst_nu = worst_nu.max((lhs - rhs).abs());

        let al = BigRational::new((j as i64).into(), (2 * points as i64 + 2).into());
        let be = &two * &al;
        let mut f = TheoremParams::new(1);
        f.alpha = Some(al.clone());
        let mut g = f.clone();
        g.beta = Some(be.clone());
        let (_, af) = theorem_argument(TheoremKind::F, &f)?;
        let (_, ag) = theorem_argument(TheoremKind::FG, &g)?;
        if af.is_none() || af != ag {
            exact_rl += 1;
        }
        let (x, y) = (ratio_to_f64(&al), ratio_to_f64(&be));
        let lhs = 4.0 * x * (1.0 - x);
        let rhs = y * y * (1.0 - x) / (y - x);
        worst_rl = worst_rl.max((lhs - rhs).abs());
    }
    rep.push(Check::zero_failures("exponent_identity_exact", exact_nu));
    rep.push(Check::within("exponent_identity_float_error", worst_nu, None, Some(IDENTITY_TOL)));
    rep.push(Check::zero_failures("runlength_identity_exact", exact_rl));
    rep.push(Check::within("runlength_identity_float_error", worst_rl, None, Some(IDENTITY_TOL)));
    rep.push(Check::within("grid_points", points as f64, Some(1.0), None));
    Ok(rep)
}

/// One cell of the solver cross-validation grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCell {
    /// Alphabet bound.
    pub b: u64,
    /// `α` as `p/q`.
    pub alpha: String,
    /// Target digit.
    pub i: u64,
    /// Enumeration + extrapolation value and bracket.
    pub enumerate: [f64; 3],
    /// Spectral value and bracket.
    pub spectral: [f64; 3],
}

/// The cross-validation grid `B ∈ {1,2,3}`, `α ∈ {0, 1/4, 1/2}`, `i ∈ {1,2}`.
pub fn crosscheck_grid(budget: u64) -> Result<Vec<CrossCell>, CliError> {
    let alphas = [(0i64, 1i64), (1, 4), (1, 2)];
    let mut cells = Vec::new();
    for b in 1..=3u64 {
        for &(p, q) in &alphas {
            for i in 1..=2u64 {
                let a = BigRational::new(p.into(), q.into());
                let e = dim_limit(b, &a, i, &cfdim_core::dim::DEFAULT_N_SCHEDULE, PredimKind::Hat, budget)?;
                let s = spectral_dim(Alphabet::Finite(b), &a, i)?;
                cells.push(CrossCell {
                    b,
                    alpha: format!("{p}/{q}"),
                    i,
                    enumerate: [e.value, e.lo, e.hi],
                    spectral: [s.value, s.lo, s.hi],
                });
            }
        }
    }
    Ok(cells)
}

/// Largest tolerated disagreement between the two solvers.
pub const CROSSCHECK_TOL: f64 = 0.01;

/// Enumeration against spectral solutions, the two-letter oracle window and
/// `α`-monotonicity.
pub fn solver_crosscheck(budget: u64) -> Result<Report, CliError> {
    let cells = crosscheck_grid(budget)?;
    let mut rep = Report::new("solver_crosscheck");
    let mut worst = 0.0f64;
    let mut disjoint = 0u64;
    for c in &cells {
        worst = worst.max((c.enumerate[0] - c.spectral[0]).abs());
        if c.enumerate[2] < c.spectral[1] || c.spectral[2] < c.enumerate[1] {
            disjoint += 1;
        }
    }
    rep.push(Check::within("largest_solver_disagreement", worst, None, Some(CROSSCHECK_TOL)));
    rep.push(Check::zero_failures("brackets_not_overlapping", disjoint));
    let b2 = cells.iter().find(|c| c.b == 2 && c.alpha == "0/1" && c.i == 1).expect("grid has (2, 0, 1)");
    rep.push(Check::within("two_letter_alpha_zero_enumerate", b2.enumerate[0], Some(0.526), Some(0.536)));
    rep.push(Check::within("two_letter_alpha_zero_spectral", b2.spectral[0], Some(0.526), Some(0.536)));
    let b1_max = cells.iter().filter(|c| c.b == 1).map(|c| c.enumerate[0].abs().max(c.spectral[0].abs())).fold(0.0, f64::max);
    rep.push(Check::within("single_letter_is_zero", b1_max, None, Some(1e-12)));
    let mut mono = 0u64;
    for b in 1..=3 {
        for i in 1..=2 {
            let v: Vec<f64> = cells.iter().filter(|c| c.b == b && c.i == i).map(|c| c.spectral[0]).collect();
            mono += v.windows(2).filter(|w| w[1] > w[0] + 1e-9).count() as u64;
        }
    }
    rep.push(Check::zero_failures("alpha_monotone_non_increasing", mono));
    rep.add_series(Series {
        name: "grid".into(),
        columns: ["B", "alpha", "i", "enumerate", "enumerate_lo", "enumerate_hi", "spectral", "spectral_lo", "spectral_hi"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: cells
            .iter()
            .map(|c| {
                let a = cfdim_core::num::parse_rational(&c.alpha).map(|r| ratio_to_f64(&r)).unwrap_or(f64::NAN);
                let mut row = vec![c.b as f64, a, c.i as f64];
                row.extend_from_slice(&c.enumerate);
                row.extend_from_slice(&c.spectral);
                row
            })
            .collect(),
    });
    Ok(rep)
}

/// Default solver budget of [`solver_crosscheck`].
pub const DEFAULT_CROSSCHECK_BUDGET: u64 = DEFAULT_BUDGET;
