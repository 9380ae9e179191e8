//! Small numerical helpers shared by the kernels: compensated summation,
//! logarithms of big integers, and exact rational parameters.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Neumaier (improved Kahan–Babuška) compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    /// Empty accumulator.
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    /// Add one term.
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another accumulator (commutative up to rounding of the final add).
    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    /// Current compensated total.
    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Natural logarithm of a positive big integer, accurate to a few ulps.
///
/// Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return libm::log(x.to_u64().unwrap_or(u64::MAX) as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    libm::log(top as f64) + shift as f64 * core::f64::consts::LN_2
}

/// Natural logarithm of a positive exact rational.
pub fn ln_ratio(x: &BigRational) -> f64 {
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    ln_biguint(n) - ln_biguint(d)
}

/// Convert an exact rational to the nearest-ish `f64` (via logarithms when the
/// parts overflow `f64`).
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let s = if x.is_negative() { -1.0 } else { 1.0 };
    s * libm::exp(ln_ratio(&x.abs()))
}

/// Error produced when a textual parameter cannot be parsed.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a number (expected p/q, a decimal, or inf)")]
pub struct ParseParamError(pub String);

/// The simplest rational (smallest denominator) in the closed interval
/// `[lo, hi]`, found by walking the Stern–Brocot tree via continued fractions.
///
/// Both endpoints must be non-negative with `lo <= hi`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl < hi.floor() || &(fl.clone() + BigRational::one()) <= hi {
        return fl + BigRational::one();
    }
    // Same integer part: recurse on the reciprocals of the fractional parts.
    let flo = lo - &fl;
    let fhi = hi - &fl;
    let inner = simplest_between(&fhi.recip(), &flo.recip());
    fl + inner.recip()
}

/// Rationalize an exact value at absolute tolerance `10^-15`: the simplest
/// rational within the tolerance.
pub fn rationalize(x: &BigRational) -> BigRational {
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(15));
    if x.is_negative() {
        return -rationalize(&-x);
    }
    let lo = if x > &tol { x - &tol } else { BigRational::zero() };
    simplest_between(&lo, &(x + &tol))
}

/// Parse `p/q`, an integer, or a decimal literal (optionally with exponent)
/// into an exact rational, without any rounding.
pub fn parse_rational_exact(s: &str) -> Option<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], i64::from_str(&t[k + 1..]).ok()?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::from(ip);
    digits.push_str(fp);
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let scale = exp - fp.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return None;
    }
    let ten = BigInt::from(10u32);
    let v = if scale >= 0 {
        BigRational::from_integer(n * ten.pow(scale as u32))
    } else {
        BigRational::new(n, ten.pow((-scale) as u32))
    };
    Some(if neg { -v } else { v })
}

/// Parse `p/q`, an integer, or a decimal literal into an exact rational.
/// Literals with a fractional part are rationalized at `10^-15`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseParamError> {
    let v = parse_rational_exact(s).ok_or_else(|| ParseParamError(String::from(s)))?;
    if v.denom().is_one() || s.contains('/') {
        Ok(v)
    } else {
        Ok(rationalize(&v))
    }
}

/// An exact non-negative parameter that may also be `+∞` (used for ν).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    /// A finite exact rational.
    Finite(BigRational),
    /// Positive infinity.
    Infinite,
}

impl Param {
    /// Build a finite parameter `p/q`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Param::Finite(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Build a finite integer parameter.
    pub fn int(p: i64) -> Self {
        Param::ratio(p, 1)
    }

    /// Rationalize a float (exactly representable binary value, then simplest
    /// rational within `10^-15`).
    pub fn from_f64(x: f64) -> Self {
        if x.is_infinite() && x > 0.0 {
            return Param::Infinite;
        }
        let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Param::Finite(rationalize(&r))
    }

    /// Finite value, if any.
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Param::Finite(r) => Some(r),
            Param::Infinite => None,
        }
    }

    /// Floating-point view (`inf` for the infinite parameter).
    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Finite(r) => ratio_to_f64(r),
            Param::Infinite => f64::INFINITY,
        }
    }

    /// True for an exact zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, Param::Finite(r) if r.is_zero())
    }
}

impl FromStr for Param {
    type Err = ParseParamError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Param::Infinite);
        }
        parse_rational(t).map(Param::Finite)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(r) => fmt_ratio(r, f),
            Param::Infinite => f.write_str("inf"),
        }
    }
}

/// Format an exact rational as `p/q` (or `p` for integers).
pub fn fmt_ratio(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// `floor(n · r)` for a non-negative exact rational `r`, as `u64`
/// (saturating).
pub fn floor_mul(n: u64, r: &BigRational) -> u64 {
    let v = (BigInt::from(n) * r.numer()).div_floor(r.denom());
    if v.sign() == Sign::Minus {
        0
    } else {
        v.to_u64().unwrap_or(u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = Neumaier::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.total(), 2.0);
    }

    #[test]
    fn ln_of_large_integer() {
        let x = BigUint::from(3u32).pow(500);
        let expect = 500.0 * libm::log(3.0);
        assert!((ln_biguint(&x) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("0.333").unwrap(), BigRational::new(333.into(), 1000.into()));
        assert_eq!(
            parse_rational("0.3333333333333333").unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        assert_eq!(parse_rational("2").unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(parse_rational("1e-1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!("inf".parse::<Param>().unwrap(), Param::Infinite);
    }

    #[test]
    fn rationalize_float_third() {
        assert_eq!(Param::from_f64(1.0 / 3.0), Param::ratio(1, 3));
        assert_eq!(Param::from_f64(0.5), Param::ratio(1, 2));
    }

    #[test]
    fn floor_mul_exact() {
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(floor_mul(12, &third), 4);
        assert_eq!(floor_mul(13, &third), 4);
    }
}
