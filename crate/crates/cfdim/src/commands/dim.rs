//! `dim`: dimension formulas, pre-dimensional numbers and pressure roots,
//! optionally swept over a parameter.

use std::fmt;
use std::str::FromStr;

use clap::Args;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use cfdim_core::dim::{
    dim_full, dim_limit, spectral_dim, theorem_argument, theorem_dims, Alphabet, Branch, DimEstimate, PredimKind,
    TheoremKind, TheoremParams, DEFAULT_B_SCHEDULE, DEFAULT_N_SCHEDULE,
};
use cfdim_core::num::{ratio_to_f64, Param};

use super::{envelope, Output};
use crate::config::{Config, Format};
use crate::error::CliError;
use crate::formats::{float_string, ratio_string, to_csv, Par, Rat};

/// Parameters of `dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct DimParams {
    /// Quantity: a formula (`U_set`, `E_hat`, `E_joint`, `nu_level`, `FG`,
    /// `F`) or a solver (`hat`, `s`: enumeration extrapolated in `n`;
    /// `spectral`: pressure root on `{1..B}`; `full`: pressure root on ℕ).
    #[arg(long)]
    pub kind: String,
    /// Uniform exponent `ν̂` (`inf` allowed).
    #[arg(long)]
    pub nu_hat: Option<Par>,
    /// Asymptotic exponent `ν` (`inf` allowed).
    #[arg(long)]
    pub nu: Option<Par>,
    /// `α` (liminf of `R_n/n`, or the solver's exponent parameter).
    #[arg(long)]
    pub alpha: Option<Rat>,
    /// `β` (limsup of `R_n/n`).
    #[arg(long)]
    pub beta: Option<Rat>,
    /// Target digit `i`.
    #[arg(long, default_value_t = 1)]
    pub i: u64,
    /// Alphabet bound `B` of the finite-alphabet solvers.
    #[arg(long = "B", default_value_t = 2)]
    pub b: u64,
    /// Orders `n` of the enumeration solvers.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_SCHEDULE)]
    pub n_schedule: Vec<usize>,
    /// Alphabet bounds of the `B → ∞` trend reported with ℕ-alphabet values.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_B_SCHEDULE)]
    pub b_schedule: Vec<u64>,
    /// Sweep: `B=lo..hi` (integers) or `<param>=lo..hi[:k]` for
    /// `alpha`, `beta`, `nu`, `nu_hat` (`k` equally spaced values, default 11).
    #[arg(long)]
    pub curve: Option<Curve>,
}

/// The swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveParam {
    /// Alphabet bound.
    B,
    /// `α`.
    Alpha,
    /// `β`.
    Beta,
    /// `ν`.
    Nu,
    /// `ν̂`.
    NuHat,
}

impl CurveParam {
    fn name(&self) -> &'static str {
        match self {
            CurveParam::B => "B",
            CurveParam::Alpha => "alpha",
            CurveParam::Beta => "beta",
            CurveParam::Nu => "nu",
            CurveParam::NuHat => "nu_hat",
        }
    }
}

/// A parameter sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    /// Swept parameter.
    pub param: CurveParam,
    /// First value.
    pub lo: BigRational,
    /// Last value.
    pub hi: BigRational,
    /// Number of values (ignored for `B`, which steps by 1).
    pub steps: usize,
}

/// Default number of values of a rational sweep.
pub const DEFAULT_CURVE_STEPS: usize = 11;

impl FromStr for Curve {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("curve must be <param>=lo..hi[:k]: {s:?}");
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let param = match name.trim() {
            "B" | "b" => CurveParam::B,
            "alpha" => CurveParam::Alpha,
            "beta" => CurveParam::Beta,
            "nu" => CurveParam::Nu,
            "nu_hat" | "nu-hat" => CurveParam::NuHat,
            other => return Err(format!("unknown curve parameter {other:?}")),
        };
        let (range, steps) = match range.split_once(':') {
            Some((r, k)) => (r, k.trim().parse::<usize>().map_err(|_| bad())?),
            None => (range, DEFAULT_CURVE_STEPS),
        };
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let lo = lo.parse::<Rat>()?.0;
        let hi = hi.parse::<Rat>()?.0;
        if param == CurveParam::B && (!lo.is_integer() || !hi.is_integer()) {
            return Err("B sweeps need integer end points".into());
        }
        let steps = if param == CurveParam::B { 0 } else { steps };
        if param != CurveParam::B && steps < 2 {
            return Err("a sweep needs at least 2 values".into());
        }
        Ok(Curve { param, lo, hi, steps })
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.param == CurveParam::B {
            write!(f, "B={}..{}", self.lo.numer(), self.hi.numer())
        } else {
            write!(
                f,
                "{}={}..{}:{}",
                self.param.name(),
                ratio_string(&self.lo),
                ratio_string(&self.hi),
                self.steps
            )
        }
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Curve {
    /// The swept values.
    pub fn values(&self) -> Result<Vec<BigRational>, CliError> {
        if self.lo > self.hi {
            return Err(CliError::Range("curve end points must be increasing".into()));
        }
        if self.param == CurveParam::B {
            let (lo, hi) = (self.lo.to_integer(), self.hi.to_integer());
            let (lo, hi) = (
                lo.to_u64().ok_or_else(|| CliError::Range("B must be positive".into()))?,
                hi.to_u64().ok_or_else(|| CliError::Range("B too large".into()))?,
            );
            if lo == 0 || hi - lo > 10_000 {
                return Err(CliError::Range("B sweep must lie in 1.. and span at most 10^4 values".into()));
            }
            return Ok((lo..=hi).map(|b| BigRational::from_integer(b.into())).collect());
        }
        let k = self.steps;
        let step = (&self.hi - &self.lo) / BigRational::from_integer((k as u64 - 1).into());
        Ok((0..k)
            .map(|j| &self.lo + &step * BigRational::from_integer((j as u64).into()))
            .collect())
    }
}

/// Solver kinds besides the formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Theorem(TheoremKind),
    Hat,
    S,
    Spectral,
    Full,
}

fn parse_kind(s: &str) -> Result<Kind, CliError> {
    if let Some(t) = TheoremKind::parse(s) {
        return Ok(Kind::Theorem(t));
    }
    Ok(match s {
        "hat" => Kind::Hat,
        "s" => Kind::S,
        "spectral" => Kind::Spectral,
        "full" => Kind::Full,
        _ => return Err(CliError::Parse(format!("unknown kind {s:?}"))),
    })
}

/// A trace point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceOut {
    /// The order `n` or the alphabet bound `B`.
    pub at: u64,
    /// Value.
    pub value: f64,
    /// Lower end of the bracket.
    pub lo: f64,
    /// Upper end of the bracket.
    pub hi: f64,
}

/// A named auxiliary quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoteOut {
    /// Name.
    pub name: &'static str,
    /// Value.
    pub value: f64,
}

/// One dimension value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimOut {
    /// Kind evaluated.
    pub kind: String,
    /// Branch of a piecewise formula.
    pub branch: Option<&'static str>,
    /// Exact argument `α'` of the pressure root on the formula branch.
    pub argument: Option<String>,
    /// Target digit used.
    pub i: u64,
    /// Value.
    pub value: f64,
    /// Lower end of the bracket.
    pub lo: f64,
    /// Upper end of the bracket.
    pub hi: f64,
    /// Method tag.
    pub method: &'static str,
    /// Largest order `n` used.
    pub n_used: Option<usize>,
    /// Alphabet used (`"inf"` for ℕ).
    pub b_used: Option<String>,
    /// True for a degenerate sum without free digits.
    pub degenerate: bool,
    /// Convergence trace in `n` or `B`.
    pub trace: Vec<TraceOut>,
    /// Auxiliary quantities.
    pub notes: Vec<NoteOut>,
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::One => "one",
        Branch::Formula => "formula",
        Branch::Zero => "zero",
    }
}

fn out(kind: &str, branch: Option<Branch>, argument: Option<&BigRational>, i: u64, e: &DimEstimate) -> DimOut {
    DimOut {
        kind: kind.to_string(),
        branch: branch.map(branch_name),
        argument: argument.map(ratio_string),
        i,
        value: e.value,
        lo: e.lo,
        hi: e.hi,
        method: e.method.tag(),
        n_used: e.n_used,
        b_used: e.b_used.map(|b| b.to_string()),
        degenerate: e.degenerate,
        trace: e
            .trace
            .iter()
            .map(|t| TraceOut {
                at: t.at,
                value: t.value,
                lo: t.lo,
                hi: t.hi,
            })
            .collect(),
        notes: e.notes.iter().map(|&(name, value)| NoteOut { name, value }).collect(),
    }
}

fn alpha_of(p: &DimParams) -> Result<&BigRational, CliError> {
    p.alpha
        .as_ref()
        .map(|r| &r.0)
        .ok_or_else(|| CliError::Range("missing parameter alpha".into()))
}

/// Evaluate one point. `finite_b` switches the formulas from ℕ to the
/// alphabet `{1..B}` (used by `B` sweeps).
fn evaluate(p: &DimParams, budget: u64, finite_b: Option<u64>) -> Result<DimOut, CliError> {
    let kind = parse_kind(&p.kind)?;
    match kind {
        Kind::Theorem(t) => {
            let tp = TheoremParams {
                nu_hat: p.nu_hat.as_ref().map(|x| x.0.clone()),
                nu: p.nu.as_ref().map(|x| x.0.clone()),
                alpha: p.alpha.as_ref().map(|x| x.0.clone()),
                beta: p.beta.as_ref().map(|x| x.0.clone()),
                i: p.i,
            };
            match finite_b {
                None => {
                    let d = theorem_dims(t, &tp, &p.b_schedule)?;
                    Ok(out(t.name(), Some(d.branch), d.argument.as_ref(), d.i, &d.estimate))
                }
                Some(b) => {
                    let (branch, arg) = theorem_argument(t, &tp)?;
                    let i = if matches!(t, TheoremKind::F | TheoremKind::FG) { 1 } else { p.i };
                    let e = match (&branch, &arg) {
                        (Branch::Formula, Some(a)) => spectral_dim(Alphabet::Finite(b), a, i)?,
                        _ => {
                            // Constant branches do not depend on the alphabet.
                            theorem_dims(t, &tp, &[])?.estimate
                        }
                    };
                    Ok(out(t.name(), Some(branch), arg.as_ref(), i, &e))
                }
            }
        }
        Kind::Hat | Kind::S => {
            let pk = if kind == Kind::Hat { PredimKind::Hat } else { PredimKind::S };
            let b = finite_b.unwrap_or(p.b);
            let e = dim_limit(b, alpha_of(p)?, p.i, &p.n_schedule, pk, budget)?;
            Ok(out(&p.kind, None, None, p.i, &e))
        }
        Kind::Spectral => {
            let b = finite_b.unwrap_or(p.b);
            let e = spectral_dim(Alphabet::Finite(b), alpha_of(p)?, p.i)?;
            Ok(out(&p.kind, None, None, p.i, &e))
        }
        Kind::Full => {
            if finite_b.is_some() {
                return Err(CliError::Range("kind full uses the infinite alphabet; sweep B with spectral".into()));
            }
            let e = dim_full(alpha_of(p)?, p.i, &p.b_schedule)?;
            Ok(out(&p.kind, None, None, p.i, &e))
        }
    }
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    /// Exact parameter value.
    pub param: String,
    /// Parameter as a float.
    pub param_f64: f64,
    /// Value at that parameter.
    pub value: f64,
    /// Lower end of the bracket.
    pub lo: f64,
    /// Upper end of the bracket.
    pub hi: f64,
    /// Method tag.
    pub method: &'static str,
}

/// Result of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveOut {
    /// Swept parameter.
    pub param: &'static str,
    /// Rows in sweep order.
    pub rows: Vec<CurveRow>,
}

/// Evaluate a sweep.
pub fn sweep(p: &DimParams, budget: u64, curve: &Curve) -> Result<CurveOut, CliError> {
    let mut rows = Vec::new();
    for v in curve.values()? {
        let mut q = p.clone();
        q.curve = None;
        let finite_b = match curve.param {
            CurveParam::B => {
                let b = v.to_integer().to_u64().expect("B values are validated");
                q.b = b;
                Some(b)
            }
            CurveParam::Alpha => {
                q.alpha = Some(Rat(v.clone()));
                None
            }
            CurveParam::Beta => {
                q.beta = Some(Rat(v.clone()));
                None
            }
            CurveParam::Nu => {
                q.nu = Some(Par(Param::Finite(v.clone())));
                None
            }
            CurveParam::NuHat => {
                q.nu_hat = Some(Par(Param::Finite(v.clone())));
                None
            }
        };
        // Solver kinds read `B` from `q.b`; formulas and `full` need to know
        // that the alphabet is being swept.
        let finite_b = if matches!(parse_kind(&q.kind)?, Kind::Theorem(_) | Kind::Full) { finite_b } else { None };
        let o = evaluate(&q, budget, finite_b)?;
        rows.push(CurveRow {
            param: ratio_string(&v),
            param_f64: ratio_to_f64(&v),
            value: o.value,
            lo: o.lo,
            hi: o.hi,
            method: o.method,
        });
    }
    Ok(CurveOut {
        param: curve.param.name(),
        rows,
    })
}

/// Evaluate a single point (no sweep).
pub fn point(p: &DimParams, budget: u64) -> Result<DimOut, CliError> {
    evaluate(p, budget, None)
}

/// Run `dim`.
pub fn run(cfg: &Config, p: &DimParams) -> Result<Output, CliError> {
    let budget = cfg.globals.budget;
    let format = cfg.globals.format;
    match &p.curve {
        Some(c) => {
            let res = sweep(p, budget, c)?;
            if format == Format::Json {
                return Ok(Output::ok(envelope(cfg, &res)?));
            }
            let rows: Vec<Vec<String>> = res
                .rows
                .iter()
                .map(|r| {
                    // Integer parameters (B) print without a fractional part.
                    let param = match r.param.strip_suffix("/1") {
                        Some(int) => int.to_string(),
                        None => float_string(r.param_f64),
                    };
                    vec![param, float_string(r.value), float_string(r.lo), float_string(r.hi)]
                })
                .collect();
            Ok(Output::ok(to_csv(&["param", "value", "lo", "hi"], &rows)?))
        }
        None => {
            let res = point(p, budget)?;
            if format == Format::Csv {
                let row = vec![float_string(res.value), float_string(res.lo), float_string(res.hi)];
                return Ok(Output::ok(to_csv(&["value", "lo", "hi"], &[row])?));
            }
            Ok(Output::ok(envelope(cfg, &res)?))
        }
    }
}
