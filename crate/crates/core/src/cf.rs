//! Exact continued-fraction arithmetic on `(0,1)`: expansion of rationals,
//! quadratic surds and finite-precision decimals, continuants, cylinder
//! (basic) intervals, Gauss-map shifts and the quadratic targets
//! `y = [i, i, i, …]`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::num::ln_biguint;

/// Errors raised by the continued-fraction kernels.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CfError {
    /// The input does not represent a number strictly between 0 and 1.
    #[error("input is not in the open interval (0,1)")]
    InputOutOfRange,
    /// A partial quotient does not fit in a machine word.
    #[error("partial quotient exceeds 64-bit magnitude")]
    Overflow,
    /// Fewer certified digits are available than the operation needs.
    #[error("digit sequence exhausted: need {needed} certified digits, have {have}")]
    Exhausted {
        /// Digits required.
        needed: usize,
        /// Digits available.
        have: usize,
    },
    /// The input is malformed (zero denominator, square radicand, small budget…).
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

/// A real number in `(0,1)` given exactly or to a stated precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealInput {
    /// The rational `p/q` with `0 < p < q`.
    Rational {
        /// Numerator.
        p: BigUint,
        /// Denominator.
        q: BigUint,
    },
    /// The quadratic surd `(u + v·√d)/w`, `d > 0` not a perfect square.
    Surd {
        /// Rational part numerator.
        u: BigInt,
        /// Coefficient of the root.
        v: BigInt,
        /// Common denominator (non-zero).
        w: BigInt,
        /// Radicand.
        d: BigUint,
    },
    /// A value known to lie in `[value − 2^-bits, value + 2^-bits]`.
    Decimal {
        /// Centre of the uncertainty interval.
        value: BigRational,
        /// Precision budget in bits (at least 64).
        bits: u32,
    },
}

impl RealInput {
    /// The rational `p/q`.
    pub fn rational(p: u64, q: u64) -> Self {
        RealInput::Rational { p: p.into(), q: q.into() }
    }

    /// The surd `(u + v√d)/w`.
    pub fn surd(u: i64, v: i64, w: i64, d: u64) -> Self {
        RealInput::Surd { u: u.into(), v: v.into(), w: w.into(), d: d.into() }
    }

    /// `y = [i, i, …] = (√(i²+4) − i)/2`.
    pub fn quadratic_target(i: u64) -> Self {
        RealInput::Surd {
            u: -BigInt::from(i),
            v: BigInt::one(),
            w: BigInt::from(2u32),
            d: BigUint::from(i) * i + 4u32,
        }
    }

    /// A decimal literal such as `"0.7071"` with a precision budget.
    pub fn decimal(s: &str, bits: u32) -> Result<Self, CfError> {
        let value = crate::num::parse_rational_exact(s)
            .ok_or(CfError::InvalidInput("malformed decimal literal"))?;
        Ok(RealInput::Decimal { value, bits })
    }

    /// The dyadic cell `[m/2^b, (m+1)/2^b]`, which contains a uniformly drawn
    /// real whose first `b` bits are `m`.
    pub fn dyadic_cell(m: BigUint, b: u32) -> Self {
        let den = BigInt::one() << (b + 1);
        let num = BigInt::from(m) * 2u32 + 1u32;
        RealInput::Decimal { value: BigRational::new(num, den), bits: b + 1 }
    }

    /// Default precision budget for requesting `n` digits: `4n + 64` bits.
    pub fn default_bits(n: usize) -> u32 {
        (4 * n + 64).min(u32::MAX as usize) as u32
    }
}

/// Provenance of a digit sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Exact rational input.
    Rational,
    /// Exact quadratic surd input.
    Surd,
    /// Finite-precision input (decimal or dyadic cell).
    Decimal,
    /// Digits supplied directly (constructions, samplers, files).
    Synthetic,
}

/// How a digit sequence ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqEnd {
    /// More digits exist; only the requested number was produced.
    Open,
    /// The expansion terminated (rational input): the sequence is complete.
    Terminated,
    /// The precision budget could not certify the next digit.
    Uncertified,
}

/// A finite prefix of partial quotients `a_1, …, a_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSeq {
    /// The certified digits, each at least 1.
    pub digits: Vec<u64>,
    /// End marker.
    pub end: SeqEnd,
    /// Where the digits came from.
    pub source: Source,
}

impl DigitSeq {
    /// Wrap directly supplied digits (open-ended).
    ///
    /// # Panics
    /// Panics if a digit is zero.
    pub fn from_digits(digits: Vec<u64>) -> Self {
        assert!(digits.iter().all(|&a| a >= 1), "partial quotients are at least 1");
        DigitSeq { digits, end: SeqEnd::Open, source: Source::Synthetic }
    }

    /// True if no further digits are certified (terminated or out of precision).
    pub fn exhausted(&self) -> bool {
        self.end != SeqEnd::Open
    }

    /// Number of certified digits.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    /// True if no digit is certified.
    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

fn to_digit(a: &BigUint) -> Result<u64, CfError> {
    a.to_u64().ok_or(CfError::Overflow)
}

/// Euclid-style digit stream of a rational `p/q` in `(0,1]`.
struct RationalDigits {
    p: BigUint,
    q: BigUint,
}

impl RationalDigits {
    /// Next digit and whether the expansion terminated with it.
    fn next(&mut self) -> Option<Result<(u64, bool), CfError>> {
        if self.p.is_zero() {
            return None;
        }
        let (a, r) = self.q.div_rem(&self.p);
        self.q = core::mem::replace(&mut self.p, r);
        Some(to_digit(&a).map(|a| (a, self.p.is_zero())))
    }
}

fn expand_rational(p: &BigUint, q: &BigUint, n: usize) -> Result<DigitSeq, CfError> {
    if q.is_zero() {
        return Err(CfError::InvalidInput("zero denominator"));
    }
    if p.is_zero() || p >= q {
        return Err(CfError::InputOutOfRange);
    }
    let mut it = RationalDigits { p: p.clone(), q: q.clone() };
    let mut digits = Vec::with_capacity(n.min(1 << 16));
    let mut end = SeqEnd::Open;
    while digits.len() < n {
        match it.next() {
            Some(r) => {
                let (a, done) = r?;
                digits.push(a);
                if done {
                    end = SeqEnd::Terminated;
                    break;
                }
            }
            None => {
                end = SeqEnd::Terminated;
                break;
            }
        }
    }
    if digits.len() == n && it.p.is_zero() {
        end = SeqEnd::Terminated;
    }
    Ok(DigitSeq { digits, end, source: Source::Rational })
}

/// State `(P + √D)/Q` of the exact quadratic-surd expansion.
#[derive(Clone, Debug)]
pub struct SurdState {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    sqrt_d: BigInt,
}

impl SurdState {
    /// Normalize `(u + v√d)/w` into `(P + √D)/Q` with `Q | D − P²`.
    pub fn new(u: &BigInt, v: &BigInt, w: &BigInt, d: &BigUint) -> Result<Self, CfError> {
        if w.is_zero() {
            return Err(CfError::InvalidInput("zero denominator"));
        }
        if v.is_zero() {
            return Err(CfError::InvalidInput("surd with zero root coefficient is rational"));
        }
        let root = d.sqrt();
        if d.is_zero() || &(&root * &root) == d {
            return Err(CfError::InvalidInput("radicand must be a positive non-square"));
        }
        let mut dd = BigInt::from(d.clone()) * v * v;
        let (mut p, mut q) = if v.is_positive() { (u.clone(), w.clone()) } else { (-u, -w) };
        let r = (&dd - &p * &p).mod_floor(&q);
        if !r.is_zero() {
            let qa = q.abs();
            p *= &qa;
            dd *= &q * &q;
            q *= &qa;
        }
        let sqrt_d = BigInt::from(dd.magnitude().sqrt());
        Ok(SurdState { p, q, d: dd, sqrt_d })
    }

    /// `floor((P + √D)/Q)`.
    fn floor(&self) -> BigInt {
        if self.q.is_positive() {
            (&self.p + &self.sqrt_d).div_floor(&self.q)
        } else {
            (-&self.p - &self.sqrt_d - BigInt::one()).div_floor(&(-&self.q))
        }
    }

    /// Replace `x` by `1/(x − a)`.
    fn step(&mut self, a: &BigInt) {
        let p = a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        self.p = p;
        self.q = q;
    }

    /// Floating-point value of the current state.
    pub fn to_f64(&self) -> f64 {
        let num = self.p.to_f64().unwrap_or(f64::NAN) + libm::sqrt(self.d.to_f64().unwrap_or(f64::NAN));
        num / self.q.to_f64().unwrap_or(f64::NAN)
    }
}

fn expand_surd(u: &BigInt, v: &BigInt, w: &BigInt, d: &BigUint, n: usize) -> Result<DigitSeq, CfError> {
    let mut st = SurdState::new(u, v, w, d)?;
    let a0 = st.floor();
    if !a0.is_zero() {
        return Err(CfError::InputOutOfRange);
    }
    let mut digits = Vec::with_capacity(n.min(1 << 16));
    st.step(&a0);
    for _ in 0..n {
        let a = st.floor();
        let digit = match a.sign() {
            Sign::Plus => a.to_u64().ok_or(CfError::Overflow)?,
            _ => return Err(CfError::InputOutOfRange),
        };
        digits.push(digit);
        st.step(&a);
    }
    Ok(DigitSeq { digits, end: SeqEnd::Open, source: Source::Surd })
}

fn expand_interval(lo: &BigRational, hi: &BigRational, n: usize) -> Result<DigitSeq, CfError> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut digits = Vec::new();
    if !(lo > &zero && hi < &one) {
        return Ok(DigitSeq { digits, end: SeqEnd::Uncertified, source: Source::Decimal });
    }
    let mut a = RationalDigits { p: lo.numer().magnitude().clone(), q: lo.denom().magnitude().clone() };
    let mut b = RationalDigits { p: hi.numer().magnitude().clone(), q: hi.denom().magnitude().clone() };
    while digits.len() < n {
        let (da, ta) = match a.next() {
            Some(r) => r?,
            None => break,
        };
        let (db, tb) = match b.next() {
            Some(r) => r?,
            None => break,
        };
        // A terminating endpoint sits on a cylinder boundary: the digit is not
        // certified for the whole interval.
        if da != db || ta || tb {
            break;
        }
        digits.push(da);
    }
    let end = if digits.len() == n { SeqEnd::Open } else { SeqEnd::Uncertified };
    Ok(DigitSeq { digits, end, source: Source::Decimal })
}

/// Expand `x` into (up to) `n` certified partial quotients.
///
/// Rational inputs stop when the expansion terminates; decimal inputs stop
/// at the first digit the uncertainty interval cannot certify; surd inputs
/// always produce `n` digits.
pub fn expand(x: &RealInput, n: usize) -> Result<DigitSeq, CfError> {
    match x {
        RealInput::Rational { p, q } => expand_rational(p, q, n),
        RealInput::Surd { u, v, w, d } => expand_surd(u, v, w, d, n),
        RealInput::Decimal { value, bits } => {
            if *bits < 64 {
                return Err(CfError::InvalidInput("decimal precision budget must be at least 64 bits"));
            }
            if !(value > &BigRational::zero() && value < &BigRational::one()) {
                return Err(CfError::InputOutOfRange);
            }
            let eps = BigRational::new(BigInt::one(), BigInt::one() << *bits);
            expand_interval(&(value - &eps), &(value + &eps), n)
        }
    }
}

/// Continuants `p_k, q_k` for `k = −1, 0, …, n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuantTable {
    p: Vec<BigUint>,
    q: Vec<BigUint>,
}

impl ContinuantTable {
    /// Order `n` of the table.
    pub fn order(&self) -> usize {
        self.q.len() - 2
    }

    /// `p_k` for `−1 ≤ k ≤ n`.
    pub fn p(&self, k: isize) -> &BigUint {
        &self.p[(k + 1) as usize]
    }

    /// `q_k` for `−1 ≤ k ≤ n`.
    pub fn q(&self, k: isize) -> &BigUint {
        &self.q[(k + 1) as usize]
    }
}

/// Exact continuants of a digit string via `q_{k+1} = a_{k+1} q_k + q_{k−1}`.
pub fn continuants(digits: &[u64]) -> ContinuantTable {
    let mut p = Vec::with_capacity(digits.len() + 2);
    let mut q = Vec::with_capacity(digits.len() + 2);
    p.extend([BigUint::one(), BigUint::zero()]);
    q.extend([BigUint::zero(), BigUint::one()]);
    for (k, &a) in digits.iter().enumerate() {
        let pn = &p[k + 1] * a + &p[k];
        let qn = &q[k + 1] * a + &q[k];
        p.push(pn);
        q.push(qn);
    }
    ContinuantTable { p, q }
}

/// The pair `(q_n, q_{n−1})` of a digit string without storing the table.
pub fn continuant_pair(digits: &[u64]) -> (BigUint, BigUint) {
    let (mut q1, mut q0) = (BigUint::one(), BigUint::zero());
    for &a in digits {
        let next = &q1 * a + &q0;
        q0 = core::mem::replace(&mut q1, next);
    }
    (q1, q0)
}

/// Floating-point `(log q_n, q_{n−1}/q_n)` by the log-space recursion.
pub fn log_continuant(digits: &[u64]) -> (f64, f64) {
    let mut lq = crate::num::Neumaier::new();
    let mut r = 0.0f64;
    for &a in digits {
        let base = a as f64 + r;
        lq.add(libm::log(base));
        r = 1.0 / base;
    }
    (lq.total(), r)
}

/// The cylinder `I_n(a_1, …, a_n)` with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicInterval {
    /// Order `n`.
    pub order: usize,
    /// Defining digits.
    pub digits: Vec<u64>,
    /// Left endpoint (closed).
    pub left: BigRational,
    /// Right endpoint (open).
    pub right: BigRational,
    /// Exact length `1/(q_n (q_n + q_{n−1}))`.
    pub length: BigRational,
}

/// Exact cylinder interval of a digit string (the unit interval for `[]`).
pub fn basic_interval(digits: &[u64]) -> BasicInterval {
    let t = continuants(digits);
    let n = digits.len() as isize;
    let a = BigRational::new(t.p(n).clone().into(), t.q(n).clone().into());
    let b = BigRational::new(
        (t.p(n) + t.p(n - 1)).into(),
        (t.q(n) + t.q(n - 1)).into(),
    );
    let length = BigRational::new(BigInt::one(), (t.q(n) * (t.q(n) + t.q(n - 1))).into());
    let (left, right) = if a <= b { (a, b) } else { (b, a) };
    BasicInterval { order: digits.len(), digits: digits.to_vec(), left, right, length }
}

/// Exact `|I_n|` from the two last continuants.
pub fn interval_length(qn: &BigUint, qn1: &BigUint) -> BigRational {
    BigRational::new(BigInt::one(), (qn * (qn + qn1)).into())
}

/// `q_n(i, …, i)` by the recursion.
pub fn run_continuant(i: u64, n: usize) -> BigUint {
    let (mut q1, mut q0) = (BigUint::one(), BigUint::zero());
    for _ in 0..n {
        let next = &q1 * i + &q0;
        q0 = core::mem::replace(&mut q1, next);
    }
    q1
}

/// `q_n(i, …, i) = (τ^{n+1} − ζ^{n+1})/(τ − ζ)` evaluated in exact arithmetic
/// on `ℤ[√(i²+4)]`.
///
/// With `(i + √D)^{n+1} = A + B√D` one has `τ^{n+1} − ζ^{n+1} = 2B√D/2^{n+1}`
/// and `τ − ζ = √D`, so `q_n = B / 2^n`.
pub fn run_continuant_closed_form(i: u64, n: usize) -> BigUint {
    let dd = BigInt::from(i) * i + 4;
    // (a + b√D)(c + e√D) = (ac + beD) + (ae + bc)√D
    let mul = |x: &(BigInt, BigInt), y: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        (&x.0 * &y.0 + &x.1 * &y.1 * &dd, &x.0 * &y.1 + &x.1 * &y.0)
    };
    let base = (BigInt::from(i), BigInt::one());
    let mut acc = (BigInt::one(), BigInt::zero());
    let mut pow = base;
    let mut e = n + 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &pow);
        }
        pow = mul(&pow, &pow);
        e >>= 1;
    }
    let b = acc.1;
    let den = BigInt::one() << n;
    debug_assert!((&b % &den).is_zero());
    (b / den).to_biguint().expect("closed form is positive")
}

/// The digit sequence of `T^n(x)`: drop the first `n` digits.
pub fn gauss_shift(d: &DigitSeq, n: usize) -> Result<DigitSeq, CfError> {
    if d.len() < n + 1 {
        return Err(CfError::Exhausted { needed: n + 1, have: d.len() });
    }
    Ok(DigitSeq { digits: d.digits[n..].to_vec(), end: d.end, source: d.source })
}

/// Default working precision (bits) for targets.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// The fixed point `y = [i, i, …]` of the Gauss map branch `x ↦ 1/(i+x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticTarget {
    /// The repeated digit.
    pub i: u64,
    /// `y` as an exact surd.
    pub y: RealInput,
    /// `τ(i) = (i + √(i²+4))/2`.
    pub tau: f64,
    /// `ζ(i) = (i − √(i²+4))/2 = −1/τ`.
    pub zeta: f64,
    /// `g = log τ(i)`.
    pub g: f64,
    /// `floor(τ · 2^prec)`: `τ ∈ [tau_fixed, tau_fixed + 1] / 2^prec`.
    pub tau_fixed: BigUint,
    /// Precision of `tau_fixed` in bits.
    pub prec_bits: u32,
    /// Rational lower bound for `y` (a convergent).
    pub y_lo: BigRational,
    /// Rational upper bound for `y` (the neighbouring convergent).
    pub y_hi: BigRational,
}

/// Build the quadratic target for digit `i ≥ 1` at the default precision.
pub fn target(i: u64) -> QuadraticTarget {
    target_with_precision(i, DEFAULT_PRECISION_BITS)
}

/// Build the quadratic target with `prec` bits for `τ`.
///
/// # Panics
/// Panics if `i == 0`.
pub fn target_with_precision(i: u64, prec: u32) -> QuadraticTarget {
    assert!(i >= 1, "target digit must be at least 1");
    let dd = BigUint::from(i) * i + 4u32;
    // floor(τ 2^p) = floor((i 2^p + floor(√(D 4^p)))/2) since i 2^p is an integer.
    let root = (&dd << (2 * prec as usize)).sqrt();
    let tau_fixed = ((BigUint::from(i) << prec as usize) + root) >> 1usize;
    let tau = crate::num::ratio_to_f64(&BigRational::new(
        tau_fixed.clone().into(),
        BigInt::one() << prec as usize,
    ));
    let fi = i as f64;
    let s = libm::sqrt(fi * fi + 4.0);
    // Accurate ζ = −1/τ avoids cancellation in (i − √D)/2.
    let zeta = -1.0 / tau;
    debug_assert!((tau - (fi + s) / 2.0).abs() < 1e-12 * tau);
    let g = libm::log(tau);
    // Convergents p_k/q_k of y alternate around y; take consecutive ones deep
    // enough to beat the working precision.
    let depth = (prec as usize) + 8;
    let t = continuants(&alloc::vec![i; depth + 1]);
    let c1 = BigRational::new(t.p(depth as isize).clone().into(), t.q(depth as isize).clone().into());
    let c2 = BigRational::new(
        t.p(depth as isize + 1).clone().into(),
        t.q(depth as isize + 1).clone().into(),
    );
    let (y_lo, y_hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
    QuadraticTarget {
        i,
        y: RealInput::quadratic_target(i),
        tau,
        zeta,
        g,
        tau_fixed,
        prec_bits: prec,
        y_lo,
        y_hi,
    }
}

impl QuadraticTarget {
    /// Exact `|I_m(y)| = 1/(Q_m (Q_m + Q_{m−1}))` with `Q_k = q_k(i,…,i)`.
    pub fn interval_length(&self, m: usize) -> BigRational {
        let (qm, qm1) = continuant_pair(&alloc::vec![self.i; m]);
        interval_length(&qm, &qm1)
    }

    /// `log |I_m(y)|` in floating point (closed form, no big integers).
    pub fn ln_interval_length(&self, m: usize) -> f64 {
        let (lq, r) = self.ln_run_continuant(m);
        -(2.0 * lq + libm::log1p(r))
    }

    /// `(log Q_m, Q_{m−1}/Q_m)` for the run `i^m`, via the recursion for small
    /// `m` and the closed form for large `m`.
    pub fn ln_run_continuant(&self, m: usize) -> (f64, f64) {
        if m <= 64 {
            return log_continuant(&alloc::vec![self.i; m]);
        }
        // Q_m = (τ^{m+1} − ζ^{m+1})/(τ − ζ); |ζ/τ|^{m+1} < 2^-64 here.
        let lt = self.g;
        let ln_q = (m as f64 + 1.0) * lt - libm::log(self.tau - self.zeta);
        let r = 1.0 / self.tau;
        (ln_q, r)
    }

    /// Exact `Q_m` for the run `i^m`.
    pub fn run_continuant(&self, m: usize) -> BigUint {
        run_continuant(self.i, m)
    }

    /// `log Q_m` from the exact integer (for cross-checks).
    pub fn ln_run_continuant_exact(&self, m: usize) -> f64 {
        ln_biguint(&self.run_continuant(m))
    }
}
