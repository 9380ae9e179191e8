//! Dimension values `s(A, α, τ(i))`.
//!
//! Two independent routes are provided:
//!
//! * **enumeration** of the pre-dimensional numbers — the root `ρ` of
//!   `Σ (scale · q_n(…))^{−2ρ} = 1` over all words of a finite alphabet — and
//!   their extrapolation in `n`;
//! * the **pressure equation** `P_A(−s log|T′|) = 2s · α/(1−α) · log τ(i)`,
//!   with the pressure computed as the log of the leading eigenvalue of a
//!   collocated transfer operator, for finite alphabets and for `ℕ`.
//!
//! [`theorem_dims`] evaluates the piecewise dimension formulas for the
//! approximation-exponent level sets and the run-length sets.

pub mod enumerate;
pub mod extrapolate;
pub mod operator;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::num::{floor_mul, ratio_to_f64, Param};
pub use enumerate::{BudgetExceeded, PartitionSum, SumKernelSpec, DEFAULT_BUDGET};
pub use operator::{Alphabet, Collocation, SpectralError};

/// How a value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Root of an exhaustively enumerated partition sum.
    Enumerate,
    /// Extrapolation of enumerated values in `n`.
    Extrapolate,
    /// Root of the pressure equation via the collocated transfer operator.
    Spectral,
    /// A limiting convention (`s = 1` at `α = 0`, `s = 1/2` at `α = 1`).
    Convention,
    /// A constant branch of a piecewise formula (0 or 1).
    Formula,
}

impl Method {
    /// Lower-case tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Enumerate => "enumerate",
            Method::Extrapolate => "extrapolate",
            Method::Spectral => "spectral",
            Method::Convention => "convention",
            Method::Formula => "formula",
        }
    }
}

/// One point of a convergence trace (a value at some `n` or `B`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    /// The order `n` or the alphabet bound `B`.
    pub at: u64,
    /// Value at that point.
    pub value: f64,
    /// Lower end of its bracket.
    pub lo: f64,
    /// Upper end of its bracket.
    pub hi: f64,
}

/// A dimension value with an error bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct DimEstimate {
    /// Best value, in `[0, 1]`.
    pub value: f64,
    /// Lower end of the bracket.
    pub lo: f64,
    /// Upper end of the bracket.
    pub hi: f64,
    /// Largest order `n` used, if any.
    pub n_used: Option<usize>,
    /// Alphabet used, if any.
    pub b_used: Option<Alphabet>,
    /// Method tag.
    pub method: Method,
    /// True when the per-`n` sum has no free digits (value defined as 0).
    pub degenerate: bool,
    /// Convergence trace in `n` or `B`.
    pub trace: Vec<TracePoint>,
    /// Named auxiliary quantities (alternative extrapolants, error terms).
    pub notes: Vec<(&'static str, f64)>,
}

impl DimEstimate {
    fn point(value: f64, method: Method) -> Self {
        DimEstimate {
            value,
            lo: value,
            hi: value,
            n_used: None,
            b_used: None,
            method,
            degenerate: false,
            trace: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Half-width of the bracket.
    pub fn radius(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// True when `x` lies in the bracket widened by `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }
}

/// Errors of the dimension solvers.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DimError {
    /// Enumeration exceeds its node budget.
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    /// Spectral failure.
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    /// A parameter is outside the domain of the operation.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    /// Enumeration needs a finite alphabet.
    #[error("enumeration needs a finite alphabet bound")]
    InfiniteAlphabet,
    /// A schedule was empty or not increasing.
    #[error("schedule must be non-empty and strictly increasing")]
    BadSchedule,
}

fn out_of_range(msg: &str) -> DimError {
    DimError::OutOfRange(String::from(msg))
}

/// Input of the per-`n` pre-dimensional numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct DimQuery {
    /// Alphabet bound `B` (must be finite for enumeration).
    pub b: Alphabet,
    /// `α ∈ [0, 1]`, exact.
    pub alpha: BigRational,
    /// Target digit `i ≥ 1`.
    pub i: u64,
    /// Order `n ≥ 1`.
    pub n: usize,
    /// DFS node budget.
    pub budget: u64,
}

impl DimQuery {
    /// Query with the default budget.
    pub fn new(b: u64, alpha: BigRational, i: u64, n: usize) -> Self {
        DimQuery {
            b: Alphabet::Finite(b),
            alpha,
            i,
            n,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Which pre-dimensional number to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PredimKind {
    /// `ŝ_n`: all `n` digits free, every `q_n` scaled by `τ^{n α/(1−α)}`.
    Hat,
    /// `s_n`: `n − ⌊nα⌋` free digits followed by `⌊nα⌋` copies of `i`.
    S,
}

/// `α/(1 − α)` for `α ∈ [0, 1)`.
pub fn kappa(alpha: &BigRational) -> f64 {
    ratio_to_f64(&(alpha / (BigRational::one() - alpha)))
}

fn check_alpha(alpha: &BigRational) -> Result<(), DimError> {
    if alpha.is_negative() || alpha > &BigRational::one() {
        return Err(out_of_range("alpha must lie in [0, 1]"));
    }
    Ok(())
}

fn check_i(i: u64) -> Result<(), DimError> {
    if i == 0 {
        return Err(out_of_range("target digit i must be at least 1"));
    }
    Ok(())
}

fn finite_b(b: Alphabet) -> Result<u64, DimError> {
    match b {
        Alphabet::Finite(0) => Err(out_of_range("alphabet bound must be at least 1")),
        Alphabet::Finite(b) => Ok(b),
        Alphabet::Infinite => Err(DimError::InfiniteAlphabet),
    }
}

/// Root of a prepared partition sum as an estimate.
fn predim_from_spec(b: u64, spec: SumKernelSpec, n: usize, budget: u64) -> Result<DimEstimate, DimError> {
    let mut est = if spec.free_length == 0 {
        let mut e = DimEstimate::point(0.0, Method::Enumerate);
        e.degenerate = true;
        e
    } else {
        let ps = PartitionSum::new(b, spec, budget)?;
        let (v, lo, hi) = enumerate::root(&ps, ROOT_TOL);
        let mut e = DimEstimate::point(v, Method::Enumerate);
        e.lo = lo;
        e.hi = hi;
        e
    };
    est.n_used = Some(n);
    est.b_used = Some(Alphabet::Finite(b));
    Ok(est)
}

/// Root tolerance for the per-`n` numbers.
pub const ROOT_TOL: f64 = 1e-12;

/// The hat number `ŝ_n(A_B, α, τ(i))`.
///
/// `α = 1` has no free scale and is reported as a degenerate 0.
pub fn predim_hat(q: &DimQuery) -> Result<DimEstimate, DimError> {
    check_alpha(&q.alpha)?;
    check_i(q.i)?;
    let b = finite_b(q.b)?;
    if q.n == 0 {
        return Err(out_of_range("order n must be at least 1"));
    }
    if q.alpha.is_one() {
        let mut e = DimEstimate::point(0.0, Method::Enumerate);
        e.degenerate = true;
        e.n_used = Some(q.n);
        e.b_used = Some(q.b);
        return Ok(e);
    }
    let g = crate::cf::target(q.i).g;
    let spec = SumKernelSpec {
        free_length: q.n,
        tail_len: 0,
        tail_digit: q.i,
        scale_log: q.n as f64 * kappa(&q.alpha) * g,
    };
    predim_from_spec(b, spec, q.n, q.budget)
}

/// The number `s_n(A_B, α, τ(i))` with `⌊nα⌋` trailing copies of `i`.
pub fn predim_s(q: &DimQuery) -> Result<DimEstimate, DimError> {
    check_alpha(&q.alpha)?;
    check_i(q.i)?;
    let b = finite_b(q.b)?;
    if q.n == 0 {
        return Err(out_of_range("order n must be at least 1"));
    }
    let tail = floor_mul(q.n as u64, &q.alpha) as usize;
    let spec = SumKernelSpec {
        free_length: q.n - tail,
        tail_len: tail,
        tail_digit: q.i,
        scale_log: 0.0,
    };
    predim_from_spec(b, spec, q.n, q.budget)
}

/// The segment number `s̃`: `l − tail_len` free digits followed by a run of
/// `tail_len` copies of `i`.
pub fn predim_tilde(b: u64, i: u64, l: usize, tail_len: usize, budget: u64) -> Result<DimEstimate, DimError> {
    check_i(i)?;
    let b = finite_b(Alphabet::Finite(b))?;
    if tail_len > l {
        return Err(out_of_range("tail length exceeds the segment length"));
    }
    let spec = SumKernelSpec {
        free_length: l - tail_len,
        tail_len,
        tail_digit: i,
        scale_log: 0.0,
    };
    predim_from_spec(b, spec, l, budget)
}

/// Extrapolate per-`n` values along an increasing schedule.
///
/// Values carry an expansion in powers of `1/n` (a constant term from the
/// spectral gap plus exponentially small corrections), so the main estimate
/// is Richardson extrapolation in `h = 1/n`; Aitken's Δ² on the last three
/// values is reported as a note. The bracket spans the last raw value and the
/// extrapolant, widened by the change from one extrapolation order lower
/// (at least [`EXTRAPOLATION_FLOOR`] times the extrapolation distance).
pub fn dim_limit(
    b: u64,
    alpha: &BigRational,
    i: u64,
    schedule: &[usize],
    kind: PredimKind,
    budget: u64,
) -> Result<DimEstimate, DimError> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DimError::BadSchedule);
    }
    let mut trace = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let q = DimQuery {
            b: Alphabet::Finite(b),
            alpha: alpha.clone(),
            i,
            n,
            budget,
        };
        let e = match kind {
            PredimKind::Hat => predim_hat(&q)?,
            PredimKind::S => predim_s(&q)?,
        };
        trace.push(TracePoint {
            at: n as u64,
            value: e.value,
            lo: e.lo,
            hi: e.hi,
        });
    }
    let ys: Vec<f64> = trace.iter().map(|t| t.value).collect();
    let last = *ys.last().unwrap_or(&0.0);
    let (full, lower) = extrapolate::richardson(schedule, &ys);
    let mut notes = Vec::new();
    notes.push(("richardson", full));
    notes.push(("richardson_lower_order", lower));
    if ys.len() >= 3 {
        let k = ys.len();
        if let Some(a) = extrapolate::aitken(ys[k - 3], ys[k - 2], ys[k - 1]) {
            notes.push(("aitken", a));
        }
    }
    // Adding 0.0 turns a clamped −0.0 into +0.0.
    let value = full.clamp(0.0, 1.0) + 0.0;
    let spread = (EXTRAPOLATION_SAFETY * (full - lower).abs()).max(EXTRAPOLATION_FLOOR * (last - full).abs());
    let mut est = DimEstimate::point(value, Method::Extrapolate);
    est.lo = (last.min(value) - spread).max(0.0);
    est.hi = (last.max(value) + spread).min(1.0);
    est.n_used = schedule.last().copied();
    est.b_used = Some(Alphabet::Finite(b));
    est.trace = trace;
    est.notes = notes;
    Ok(est)
}

/// Factor applied to the change between extrapolation orders when sizing the
/// bracket of [`dim_limit`] (the change underestimates the error by up to
/// ~2× on the two-letter alphabet).
pub const EXTRAPOLATION_SAFETY: f64 = 4.0;

/// Smallest bracket half-width of [`dim_limit`] as a fraction of the
/// extrapolation distance `|last value − extrapolant|`. The change between
/// extrapolation orders can vanish by cancellation; across `B ≤ 3`,
/// `α ≤ 1/2`, `i ≤ 2` the true error stays below `1.5·10⁻³` of the distance.
pub const EXTRAPOLATION_FLOOR: f64 = 5e-3;

/// Default schedule for [`dim_limit`].
pub const DEFAULT_N_SCHEDULE: [usize; 4] = [8, 10, 12, 14];

/// Settings of the spectral solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralConfig {
    /// Collocation degree of the main solve.
    pub degree: usize,
    /// Collocation degree of the discretization check.
    pub check_degree: usize,
    /// Bisection tolerance on `s`.
    pub tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            degree: operator::DEFAULT_DEGREE,
            check_degree: 40,
            tol: 1e-10,
        }
    }
}

/// Pressure `P_{A_B}(−s log|T′|)` on a finite alphabet at the default degree.
pub fn spectral_pressure(b: u64, s: f64) -> Result<f64, DimError> {
    let b = finite_b(Alphabet::Finite(b))?;
    let coll = Collocation::new(operator::DEFAULT_DEGREE);
    Ok(operator::pressure(&coll, Alphabet::Finite(b), s)?)
}

/// Smallest offset above `1/2` at which the infinite-alphabet operator is
/// evaluated.
const HALF_OFFSET: f64 = 1e-12;

/// Root of `G(s) = P(s) − 2sκg` on the admissible interval, by bisection.
fn balance_root(coll: &Collocation, alphabet: Alphabet, kappa: f64, g: f64, tol: f64) -> Result<(f64, f64), DimError> {
    let gfun = |s: f64| -> Result<f64, DimError> {
        Ok(operator::pressure(coll, alphabet, s)? - 2.0 * s * kappa * g)
    };
    let (mut lo, mut hi) = match alphabet {
        Alphabet::Finite(_) => (0.0, 1.0),
        Alphabet::Infinite => (0.5 + HALF_OFFSET, 1.0),
    };
    if gfun(lo)? <= 0.0 {
        // Finite B = 1 (G(0) = 0) or an infinite-alphabet root within the
        // offset of 1/2.
        return Ok(match alphabet {
            Alphabet::Finite(_) => (0.0, 0.0),
            Alphabet::Infinite => (0.5, lo),
        });
    }
    if gfun(hi)? >= 0.0 {
        return Ok((hi, hi));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if gfun(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Root of the pressure equation `P_A(−s log|T′|) = 2s · α/(1−α) · log τ(i)`.
///
/// Finite alphabets search `s ∈ [0, 1]`; the infinite alphabet searches
/// `(1/2, 1]`, where the operator is defined. The bracket is widened by the
/// difference to a solve at a higher collocation degree.
pub fn spectral_dim(b: Alphabet, alpha: &BigRational, i: u64) -> Result<DimEstimate, DimError> {
    spectral_dim_with(b, alpha, i, &SpectralConfig::default())
}

/// [`spectral_dim`] with explicit settings.
pub fn spectral_dim_with(b: Alphabet, alpha: &BigRational, i: u64, cfg: &SpectralConfig) -> Result<DimEstimate, DimError> {
    check_alpha(alpha)?;
    check_i(i)?;
    if alpha.is_one() {
        return Err(out_of_range("the pressure equation needs alpha < 1"));
    }
    if let Alphabet::Finite(0) = b {
        return Err(out_of_range("alphabet bound must be at least 1"));
    }
    let kappa = kappa(alpha);
    let g = crate::cf::target(i).g;
    let mut est;
    if b == Alphabet::Infinite && alpha.is_zero() {
        // The Gauss measure gives P_ℕ(−log|T′|) = 0 exactly.
        est = DimEstimate::point(1.0, Method::Spectral);
    } else {
        let c1 = Collocation::new(cfg.degree);
        let c2 = Collocation::new(cfg.check_degree);
        let (lo1, hi1) = balance_root(&c1, b, kappa, g, cfg.tol)?;
        let (lo2, hi2) = balance_root(&c2, b, kappa, g, cfg.tol)?;
        let v1 = 0.5 * (lo1 + hi1);
        let v2 = 0.5 * (lo2 + hi2);
        est = DimEstimate::point(v1, Method::Spectral);
        est.lo = lo1.min(lo2);
        est.hi = hi1.max(hi2);
        est.notes.push(("discretization", (v1 - v2).abs()));
    }
    est.b_used = Some(b);
    Ok(est)
}

/// Default alphabet schedule for the `B → ∞` trend of [`dim_full`].
pub const DEFAULT_B_SCHEDULE: [u64; 4] = [8, 32, 128, 512];

/// `s(ℕ, α, τ(i))`: the infinite-alphabet root, with the finite-`B` values
/// along `b_schedule` reported as the trace. `α = 0` returns 1 and `α = 1`
/// returns 1/2 by convention.
pub fn dim_full(alpha: &BigRational, i: u64, b_schedule: &[u64]) -> Result<DimEstimate, DimError> {
    check_alpha(alpha)?;
    check_i(i)?;
    if b_schedule.windows(2).any(|w| w[0] >= w[1]) || b_schedule.first() == Some(&0) {
        return Err(DimError::BadSchedule);
    }
    if alpha.is_one() {
        let mut e = DimEstimate::point(0.5, Method::Convention);
        e.b_used = Some(Alphabet::Infinite);
        return Ok(e);
    }
    let mut est = if alpha.is_zero() {
        DimEstimate::point(1.0, Method::Convention)
    } else {
        spectral_dim(Alphabet::Infinite, alpha, i)?
    };
    est.b_used = Some(Alphabet::Infinite);
    for &b in b_schedule {
        let e = spectral_dim(Alphabet::Finite(b), alpha, i)?;
        est.trace.push(TracePoint {
            at: b,
            value: e.value,
            lo: e.lo,
            hi: e.hi,
        });
    }
    if let Some(last) = est.trace.last() {
        est.notes.push(("gap_to_largest_b", est.value - last.value));
    }
    Ok(est)
}

/// The dimension formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremKind {
    /// `dim U(y, ν̂)`: points uniformly approximating `y` with exponent `ν̂`.
    USet,
    /// `dim E(ν̂)`: level set of the uniform exponent.
    EHat,
    /// `dim E(ν̂, ν)`: joint level set of both exponents.
    EJoint,
    /// `dim {ν(x) = ν}` (equivalently `{ν(x) ≥ ν}`).
    NuLevel,
    /// `dim F(α) ∩ G(β)`: liminf / limsup of `R_n/n`.
    FG,
    /// `dim F(α)`: liminf of `R_n/n`.
    F,
}

impl TheoremKind {
    /// Parse a kind name (`U_set`, `E_hat`, `E_joint`, `nu_level`, `FG`, `F`).
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "U_set" | "u_set" | "U" => TheoremKind::USet,
            "E_hat" | "e_hat" => TheoremKind::EHat,
            "E_joint" | "e_joint" => TheoremKind::EJoint,
            "nu_level" | "nu" => TheoremKind::NuLevel,
            "FG" | "fg" => TheoremKind::FG,
            "F" | "f" => TheoremKind::F,
            _ => return None,
        })
    }

    /// Canonical name.
    pub fn name(&self) -> &'static str {
        match self {
            TheoremKind::USet => "U_set",
            TheoremKind::EHat => "E_hat",
            TheoremKind::EJoint => "E_joint",
            TheoremKind::NuLevel => "nu_level",
            TheoremKind::FG => "FG",
            TheoremKind::F => "F",
        }
    }
}

/// Parameters of [`theorem_dims`]; each kind reads the fields it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremParams {
    /// Uniform exponent `ν̂` (may be `inf` for `U_set`/`E_hat`).
    pub nu_hat: Option<Param>,
    /// Asymptotic exponent `ν` (may be `inf`).
    pub nu: Option<Param>,
    /// `α` (liminf of `R_n/n`).
    pub alpha: Option<BigRational>,
    /// `β` (limsup of `R_n/n`).
    pub beta: Option<BigRational>,
    /// Target digit `i` (the run-length formulas always use `i = 1`).
    pub i: u64,
}

impl TheoremParams {
    /// Empty parameters for target digit `i`.
    pub fn new(i: u64) -> Self {
        TheoremParams {
            nu_hat: None,
            nu: None,
            alpha: None,
            beta: None,
            i,
        }
    }
}

/// Which branch of a piecewise formula applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The constant-1 branch.
    One,
    /// The `s(argument, τ(i))` branch.
    Formula,
    /// The constant-0 ("otherwise") branch.
    Zero,
}

/// Result of [`theorem_dims`].
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremDim {
    /// Formula evaluated.
    pub kind: TheoremKind,
    /// Branch taken.
    pub branch: Branch,
    /// Exact argument `α'` of `s(α', τ(i))` on the formula branch.
    pub argument: Option<BigRational>,
    /// Target digit the dimension refers to.
    pub i: u64,
    /// The dimension.
    pub estimate: DimEstimate,
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn need<'a, T>(x: &'a Option<T>, name: &str) -> Result<&'a T, DimError> {
    x.as_ref().ok_or_else(|| DimError::OutOfRange(alloc::format!("missing parameter {name}")))
}

fn non_negative(p: &Param, name: &str) -> Result<(), DimError> {
    match p {
        Param::Finite(r) if r.is_negative() => Err(DimError::OutOfRange(alloc::format!("{name} must be non-negative"))),
        _ => Ok(()),
    }
}

fn unit_interval(r: &BigRational, name: &str) -> Result<(), DimError> {
    if r.is_negative() || r > &BigRational::one() {
        return Err(DimError::OutOfRange(alloc::format!("{name} must lie in [0, 1]")));
    }
    Ok(())
}

/// The exact argument and branch of a dimension formula.
pub fn theorem_argument(kind: TheoremKind, p: &TheoremParams) -> Result<(Branch, Option<BigRational>), DimError> {
    check_i(p.i)?;
    let one = BigRational::one();
    Ok(match kind {
        TheoremKind::USet | TheoremKind::EHat => {
            let nh = need(&p.nu_hat, "nu_hat")?;
            non_negative(nh, "nu_hat")?;
            match nh {
                Param::Finite(v) if v <= &one => {
                    let d = &one + v;
                    (Branch::Formula, Some(rat(4, 1) * v / (&d * &d)))
                }
                _ => (Branch::Zero, None),
            }
        }
        TheoremKind::EJoint => {
            let nh = need(&p.nu_hat, "nu_hat")?;
            let nu = need(&p.nu, "nu")?;
            non_negative(nh, "nu_hat")?;
            non_negative(nu, "nu")?;
            match (nh, nu) {
                (Param::Infinite, Param::Finite(_)) => return Err(out_of_range("nu_hat must not exceed nu")),
                (Param::Finite(a), Param::Finite(b)) if a > b => {
                    return Err(out_of_range("nu_hat must not exceed nu"))
                }
                _ => {}
            }
            if nu.is_zero() {
                (Branch::One, None)
            } else {
                match (nh, nu) {
                    (Param::Finite(h), Param::Infinite) if h <= &one => (Branch::Formula, Some(one.clone())),
                    (Param::Finite(h), Param::Finite(v)) if h * (&one + v) <= *v => {
                        let arg = v * v / ((&one + v) * (v - h));
                        (Branch::Formula, Some(arg))
                    }
                    _ => (Branch::Zero, None),
                }
            }
        }
        TheoremKind::NuLevel => {
            let nu = need(&p.nu, "nu")?;
            non_negative(nu, "nu")?;
            match nu {
                Param::Infinite => (Branch::Formula, Some(one)),
                Param::Finite(v) => (Branch::Formula, Some(v / (&one + v))),
            }
        }
        TheoremKind::FG => {
            let a = need(&p.alpha, "alpha")?;
            let b = need(&p.beta, "beta")?;
            unit_interval(a, "alpha")?;
            unit_interval(b, "beta")?;
            if a > b {
                return Err(out_of_range("alpha must not exceed beta"));
            }
            if b.is_zero() {
                (Branch::One, None)
            } else if a * (&one + b) <= *b {
                (Branch::Formula, Some(b * b * (&one - a) / (b - a)))
            } else {
                (Branch::Zero, None)
            }
        }
        TheoremKind::F => {
            let a = need(&p.alpha, "alpha")?;
            unit_interval(a, "alpha")?;
            if a <= &rat(1, 2) {
                (Branch::Formula, Some(rat(4, 1) * a * (&one - a)))
            } else {
                (Branch::Zero, None)
            }
        }
    })
}

/// Evaluate a dimension formula: the branch is decided exactly and the
/// formula branch calls [`dim_full`] on the exact argument.
pub fn theorem_dims(kind: TheoremKind, p: &TheoremParams, b_schedule: &[u64]) -> Result<TheoremDim, DimError> {
    let (branch, argument) = theorem_argument(kind, p)?;
    let i = match kind {
        TheoremKind::FG | TheoremKind::F => 1,
        _ => p.i,
    };
    let estimate = match (&branch, &argument) {
        (Branch::One, _) => DimEstimate::point(1.0, Method::Formula),
        (Branch::Zero, _) => DimEstimate::point(0.0, Method::Formula),
        (Branch::Formula, Some(a)) => dim_full(a, i, b_schedule)?,
        (Branch::Formula, None) => unreachable!("formula branch always carries an argument"),
    };
    Ok(TheoremDim {
        kind,
        branch,
        argument,
        i,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        rat(p, q)
    }

    #[test]
    fn two_letter_dimension_by_both_methods() {
        // Oracle: dim_H E_2 = 0.5312805062772051416…
        const E2: f64 = 0.531_280_506_277_205_1;
        let sp = spectral_dim(Alphabet::Finite(2), &r(0, 1), 1).unwrap();
        assert!((sp.value - E2).abs() < 1e-9, "{}", sp.value);
        assert!(sp.hi - sp.lo <= 1e-8);
        let lim = dim_limit(2, &r(0, 1), 1, &DEFAULT_N_SCHEDULE, PredimKind::Hat, DEFAULT_BUDGET).unwrap();
        assert!((lim.value - E2).abs() < 2e-3, "{:?}", lim);
        assert!(lim.contains(E2, 0.0), "{:?}", lim);
    }

    #[test]
    fn single_letter_is_zero() {
        let q = DimQuery::new(1, r(1, 3), 2, 9);
        assert_eq!(predim_hat(&q).unwrap().value, 0.0);
        assert_eq!(predim_s(&q).unwrap().value, 0.0);
        assert_eq!(spectral_dim(Alphabet::Finite(1), &r(1, 3), 2).unwrap().value, 0.0);
    }

    #[test]
    fn tilde_equals_s_on_matching_segment() {
        let a = predim_tilde(3, 1, 12, 6, DEFAULT_BUDGET).unwrap();
        let b = predim_s(&DimQuery::new(3, r(1, 2), 1, 12)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn alpha_one_is_degenerate() {
        let e = predim_s(&DimQuery::new(3, r(1, 1), 1, 8)).unwrap();
        assert!(e.degenerate);
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn full_alphabet_values() {
        let e = dim_full(&r(1, 2), 1, &[]).unwrap();
        assert!(e.value > 0.5 && e.value < 1.0);
        let e2 = dim_full(&r(1, 4), 1, &[]).unwrap();
        assert!(e2.value > e.value);
        let near_one = dim_full(&r(999, 1000), 1, &[]).unwrap();
        assert!((near_one.value - 0.5).abs() < 0.02);
        assert_eq!(dim_full(&r(0, 1), 1, &[]).unwrap().value, 1.0);
        assert_eq!(dim_full(&r(1, 1), 1, &[]).unwrap().value, 0.5);
    }

    #[test]
    fn theorem_branches() {
        let mut p = TheoremParams::new(1);
        p.nu_hat = Some(Param::int(1));
        let t = theorem_dims(TheoremKind::EHat, &p, &[]).unwrap();
        assert_eq!(t.argument, Some(r(1, 1)));
        assert_eq!(t.estimate.value, 0.5);
        p.nu_hat = Some(Param::int(0));
        assert_eq!(theorem_dims(TheoremKind::USet, &p, &[]).unwrap().estimate.value, 1.0);
        p.nu_hat = Some(Param::ratio(3, 5));
        p.nu = Some(Param::int(1));
        let t = theorem_dims(TheoremKind::EJoint, &p, &[]).unwrap();
        assert_eq!(t.branch, Branch::Zero);
        p.nu_hat = Some(Param::ratio(1, 2));
        let (_, arg) = theorem_argument(TheoremKind::EJoint, &p).unwrap();
        assert_eq!(arg, Some(r(1, 1)));
        p.nu_hat = Some(Param::ratio(1, 3));
        let (_, arg) = theorem_argument(TheoremKind::EJoint, &p).unwrap();
        assert_eq!(arg, Some(r(3, 4)));
        p.nu = Some(Param::Infinite);
        let (_, arg) = theorem_argument(TheoremKind::EJoint, &p).unwrap();
        assert_eq!(arg, Some(r(1, 1)));
        let mut f = TheoremParams::new(1);
        f.alpha = Some(r(0, 1));
        assert_eq!(theorem_dims(TheoremKind::F, &f, &[]).unwrap().estimate.value, 1.0);
        f.alpha = Some(r(1, 2));
        assert_eq!(theorem_dims(TheoremKind::F, &f, &[]).unwrap().estimate.value, 0.5);
        f.alpha = Some(r(3, 5));
        assert_eq!(theorem_dims(TheoremKind::F, &f, &[]).unwrap().branch, Branch::Zero);
    }
}
