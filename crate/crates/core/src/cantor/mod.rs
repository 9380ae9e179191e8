//! Cantor-set constructions built from prescribed runs of the target digit.
//!
//! A [`SeqPair`] `{n_k}, {m_k}` prescribes runs `a_{n_k+1} = … = a_{m_k} = i`;
//! all other digits are free in an alphabet `{1..B}`. The resulting sets
//! carry a mass distribution ([`measure`]) that is a product over segments
//! `(m_{k−1}, m_k]`, can be sampled ([`sample`]), and are mapped into exact
//! exponent level sets by inserting a large digit ([`insert`]).

pub mod insert;
pub mod measure;
pub mod sample;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Errors of the constructions.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CantorError {
    /// Parameters outside the construction's range.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    /// A prefix violates the prescribed pattern or alphabet.
    #[error("inadmissible digit {digit} at position {position}")]
    Inadmissible {
        /// 1-based position.
        position: u64,
        /// Offending digit.
        digit: u64,
    },
    /// The requested depth lies beyond the constructed sequence terms.
    #[error("position {0} lies beyond the constructed sequence terms")]
    BeyondSequence(u64),
    /// A dimension solve failed.
    #[error(transparent)]
    Dim(#[from] crate::dim::DimError),
}

fn oor(msg: &str) -> CantorError {
    CantorError::OutOfRange(String::from(msg))
}

/// Which recipe produced a [`SeqPair`].
#[derive(Clone, Debug, PartialEq)]
pub enum Recipe {
    /// Finite exponents `0 < ν̂ ≤ ν/(1+ν)`.
    Exponents {
        /// Uniform exponent.
        nu_hat: BigRational,
        /// Asymptotic exponent.
        nu: BigRational,
    },
    /// `ν̂ = 0` with finite `ν` (doubly exponential `n_k`).
    ExponentsZero {
        /// Asymptotic exponent.
        nu: BigRational,
    },
    /// `ν = ∞` with `0 < ν̂ < 1` and growing alphabets.
    Infinite {
        /// Uniform exponent.
        nu_hat: BigRational,
    },
    /// `ν = ∞`, `ν̂ = 0`.
    InfiniteZero,
    /// `ν = ∞`, `ν̂ = 1`.
    InfiniteOne,
    /// Run-length schedule with liminf `α` and limsup `β` of `R_n/n`.
    RunLength {
        /// Target liminf.
        alpha: BigRational,
        /// Target limsup.
        beta: BigRational,
    },
}

/// The sequences `{n_k}`, `{m_k}` (`k = 1, 2, …`, stored from index 0) and,
/// for the growing-alphabet recipes, the bounds `B_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqPair {
    /// `n_1, n_2, …`.
    pub n: Vec<u64>,
    /// `m_1, m_2, …`.
    pub m: Vec<u64>,
    /// `B_1, B_2, …` for the growing-alphabet recipes.
    pub bounds: Option<Vec<u64>>,
    /// The recipe.
    pub recipe: Recipe,
}

impl SeqPair {
    /// Number of `(n_k, m_k)` pairs.
    pub fn len(&self) -> usize {
        self.m.len()
    }

    /// True when no pair was constructed.
    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// Check `n_k < m_k < n_{k+1}` and that run lengths never decrease.
    pub fn check(&self) -> bool {
        let k = self.len();
        (0..k).all(|j| self.n[j] < self.m[j])
            && (0..k.saturating_sub(1)).all(|j| {
                self.m[j] < self.n[j + 1] && self.m[j] - self.n[j] <= self.m[j + 1] - self.n[j + 1]
            })
    }
}

fn floor_u64(x: &BigRational) -> Option<u64> {
    if x.is_negative() {
        return None;
    }
    x.numer().div_floor(x.denom()).to_u64()
}

fn ri(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Sequences for the finite exponents `(ν̂, ν)`:
/// `n_1 = 2`, `n_{k+1} = ⌊(ν/ν̂)(n_k + 1/ν)⌋ + 2`, `m_k = ⌊(1+ν) n_k⌋ + 1`;
/// for `ν̂ = 0`, `n_k = ⌊(1+ν) 2^{2^{2k}}⌋ + 2`.
///
/// Terms are produced while they fit in `u64`, up to `max_terms`.
pub fn construct_sequences(nu_hat: &BigRational, nu: &BigRational, max_terms: usize) -> Result<SeqPair, CantorError> {
    let one = BigRational::one();
    if nu_hat.is_negative() || !nu.is_positive() {
        return Err(oor("need nu_hat >= 0 and nu > 0"));
    }
    if nu_hat * (&one + nu) > *nu {
        return Err(oor("need nu_hat <= nu/(1+nu)"));
    }
    let mut n = Vec::new();
    let mut m = Vec::new();
    let mk = |nk: u64| floor_u64(&((&one + nu) * ri(nk))).and_then(|v| v.checked_add(1));
    if nu_hat.is_zero() {
        for k in 1..=max_terms {
            // 2^{2^{2k}} must fit: 2^{2k} < 64.
            let e = 1u32.checked_shl(2 * k as u32).filter(|&e| e < 63);
            let Some(e) = e else { break };
            let Some(nk) = floor_u64(&((&one + nu) * ri(1u64 << e))).and_then(|v| v.checked_add(2)) else {
                break;
            };
            let Some(mk) = mk(nk) else { break };
            n.push(nk);
            m.push(mk);
        }
        return Ok(SeqPair {
            n,
            m,
            bounds: None,
            recipe: Recipe::ExponentsZero { nu: nu.clone() },
        });
    }
    let ratio = nu / nu_hat;
    let inv_nu = nu.recip();
    let mut nk = 2u64;
    while n.len() < max_terms {
        let Some(mv) = mk(nk) else { break };
        n.push(nk);
        m.push(mv);
        let Some(next) = floor_u64(&(&ratio * (ri(nk) + &inv_nu))).and_then(|v| v.checked_add(2)) else {
            break;
        };
        nk = next;
    }
    Ok(SeqPair {
        n,
        m,
        bounds: None,
        recipe: Recipe::Exponents {
            nu_hat: nu_hat.clone(),
            nu: nu.clone(),
        },
    })
}

/// Sequences with `ν = ∞` and growing alphabet bounds `B_k`:
///
/// * `0 < ν̂ < 1`: `n_1 = 2`, `n_{k+1} = n_k^k + 2 n_k`,
///   `m_k = ⌊ν̂ n_k^k⌋ + n_k`, `B_k = ⌊m_k log m_k⌋`;
/// * `ν̂ = 0`: `n_k = 2^{2^{2k}}`, `m_k = n_k²`, `B_k = 2^{n_k}`;
/// * `ν̂ = 1`: `m_k = (k+1)!`, `n_1 = 1`, `n_{k+1} = m_k + m_k/log m_k`,
///   `B_k = ⌊2^{√m_k}⌋`.
///
/// Terms are produced while `n_k`, `m_k` fit in `u64`; bounds saturate at
/// `u64::MAX`.
pub fn construct_sequences_infinite(nu_hat: &BigRational, max_terms: usize) -> Result<SeqPair, CantorError> {
    let one = BigRational::one();
    if nu_hat.is_negative() || nu_hat > &one {
        return Err(oor("need 0 <= nu_hat <= 1"));
    }
    let mut n = Vec::new();
    let mut m = Vec::new();
    let mut b = Vec::new();
    let pow2_sat = |e: f64| if e >= 64.0 { u64::MAX } else { libm::floor(libm::exp2(e)) as u64 };
    let recipe;
    if nu_hat.is_zero() {
        recipe = Recipe::InfiniteZero;
        for k in 1..=max_terms {
            let e = 2 * k as u32;
            if e >= 6 {
                break; // 2^{2^{2k}} overflows for k ≥ 3
            }
            let nk = 1u64 << (1u32 << e);
            let Some(mk) = nk.checked_mul(nk) else { break };
            n.push(nk);
            m.push(mk);
            b.push(pow2_sat(nk as f64));
        }
    } else if nu_hat.is_one() {
        recipe = Recipe::InfiniteOne;
        let mut nk = 1u64;
        let mut fact = 1u64;
        for k in 1..=max_terms as u64 {
            let Some(f) = fact.checked_mul(k + 1) else { break };
            fact = f;
            let mk = fact;
            n.push(nk);
            m.push(mk);
            let lm = libm::log(mk as f64);
            b.push(pow2_sat(libm::sqrt(mk as f64)));
            let step = if lm > 0.0 { (mk as f64 / lm) as u64 } else { 0 };
            let Some(next) = mk.checked_add(step.max(1)) else { break };
            nk = next;
        }
    } else {
        recipe = Recipe::Infinite { nu_hat: nu_hat.clone() };
        let mut nk = 2u64;
        for k in 1..=max_terms as u32 {
            let Some(pk) = nk.checked_pow(k) else { break };
            let Some(mk) = floor_u64(&(nu_hat * ri(pk))).and_then(|v| v.checked_add(nk)) else { break };
            n.push(nk);
            m.push(mk);
            let mf = mk as f64;
            let bk = mf * libm::log(mf);
            b.push(if bk >= u64::MAX as f64 { u64::MAX } else { (bk as u64).max(1) });
            let Some(next) = pk.checked_add(2 * nk) else { break };
            nk = next;
        }
    }
    Ok(SeqPair {
        n,
        m,
        bounds: Some(b),
        recipe,
    })
}

/// Run-length schedule with `lim (m_k − n_k)/n_{k+1} = α/(1−α)` and
/// `lim (m_k − n_k)/m_k = β`: `n_1 = 2`, `m_k = ⌊n_k/(1−β)⌋ + 1`,
/// `n_{k+1} = max(⌊((1−α)/α)(m_k − n_k)⌋ + 2, m_k + 1)`.
pub fn construct_sequences_runlength(alpha: &BigRational, beta: &BigRational, max_terms: usize) -> Result<SeqPair, CantorError> {
    let one = BigRational::one();
    if !alpha.is_positive() || beta >= &one {
        return Err(oor("need 0 < alpha and beta < 1"));
    }
    if alpha * (&one + beta) > *beta {
        return Err(oor("need alpha <= beta/(1+beta)"));
    }
    let mut n = Vec::new();
    let mut m = Vec::new();
    let inv = (&one - beta).recip();
    let fac = (&one - alpha) / alpha;
    let mut nk = 2u64;
    while n.len() < max_terms {
        let Some(mk) = floor_u64(&(&inv * ri(nk))).and_then(|v| v.checked_add(1)) else { break };
        n.push(nk);
        m.push(mk);
        let Some(cand) = floor_u64(&(&fac * ri(mk - nk))).and_then(|v| v.checked_add(2)) else { break };
        let Some(floor_next) = mk.checked_add(1) else { break };
        nk = cand.max(floor_next);
    }
    Ok(SeqPair {
        n,
        m,
        bounds: None,
        recipe: Recipe::RunLength {
            alpha: alpha.clone(),
            beta: beta.clone(),
        },
    })
}

/// A Cantor set: the sequence pair, the alphabet, the run digit and the
/// insertion digit.
#[derive(Clone, Debug, PartialEq)]
pub struct CantorSpec {
    /// The sequences (with bounds `B_k` for the growing-alphabet variant).
    pub seq: SeqPair,
    /// Alphabet bound `B` of the fixed-alphabet variant (ignored when
    /// `seq.bounds` is present).
    pub b: u64,
    /// Run digit `i`.
    pub i: u64,
    /// Insertion digit `d > B` of the fixed-alphabet variant.
    pub d: u64,
}

/// One segment `(m_{k−1}, m_k]`: free digits then a run of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Segment index `k ≥ 1`.
    pub k: usize,
    /// `m_{k−1}` (0 for `k = 1`).
    pub start: u64,
    /// Number of free digits.
    pub free: u64,
    /// Run length `m_k − n_k` (the whole segment when it has no free digits).
    pub tail: u64,
    /// Alphabet bound of the free digits.
    pub bound: u64,
}

impl Segment {
    /// Segment length `l_k = m_k − m_{k−1}`.
    pub fn len(&self) -> u64 {
        self.free + self.tail
    }

    /// Always false for constructed segments.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Last position `m_k`.
    pub fn end(&self) -> u64 {
        self.start + self.len()
    }
}

/// Digits allowed at the next position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Children {
    /// Only the run digit.
    Fixed(u64),
    /// Any digit in `1..=bound`.
    Range(u64),
}

impl CantorSpec {
    /// Fixed-alphabet spec; requires `B ≥ i + 1` and `d > B`.
    pub fn new(seq: SeqPair, b: u64, i: u64, d: u64) -> Result<Self, CantorError> {
        if i == 0 {
            return Err(oor("run digit must be at least 1"));
        }
        if seq.bounds.is_none() {
            if b < i + 1 {
                return Err(oor("need B >= i + 1"));
            }
            if d <= b {
                return Err(oor("need insertion digit d > B"));
            }
        }
        if seq.is_empty() || !seq.check() {
            return Err(oor("sequence pair violates n_k < m_k < n_{k+1}"));
        }
        Ok(CantorSpec { seq, b, i, d })
    }

    /// Growing-alphabet spec (bounds taken from the sequence pair).
    pub fn infinite(seq: SeqPair, i: u64) -> Result<Self, CantorError> {
        if seq.bounds.is_none() {
            return Err(oor("growing-alphabet spec needs bounds B_k"));
        }
        CantorSpec::new(seq, 0, i, 0)
    }

    /// True for the growing-alphabet variant.
    pub fn is_infinite(&self) -> bool {
        self.seq.bounds.is_some()
    }

    /// Number of complete segments.
    pub fn segments(&self) -> usize {
        self.seq.len()
    }

    /// Segment `k` (1-based).
    ///
    /// # Panics
    /// Panics if `k` is 0 or beyond the constructed terms.
    pub fn segment(&self, k: usize) -> Segment {
        assert!(k >= 1 && k <= self.segments(), "segment index out of range");
        let start = if k == 1 { 0 } else { self.seq.m[k - 2] };
        let (n, m) = (self.seq.n[k - 1], self.seq.m[k - 1]);
        match &self.seq.bounds {
            None => Segment {
                k,
                start,
                free: n - start,
                tail: m - n,
                bound: self.b,
            },
            // Growing alphabets: digits in (m_{k−1}, n_k] are bounded by
            // B_{k−1}; before n_1 every digit is i.
            Some(bs) if k == 1 => Segment {
                k,
                start,
                free: 0,
                tail: m,
                bound: bs[0],
            },
            Some(bs) => Segment {
                k,
                start,
                free: n - start,
                tail: m - n,
                bound: bs[k - 2],
            },
        }
    }

    /// The segment containing 1-based position `p`.
    pub fn segment_of(&self, p: u64) -> Result<Segment, CantorError> {
        if p == 0 {
            return Err(oor("positions start at 1"));
        }
        let k = self.seq.m.partition_point(|&mk| mk < p);
        if k >= self.segments() {
            return Err(CantorError::BeyondSequence(p));
        }
        Ok(self.segment(k + 1))
    }

    /// Digits allowed at 1-based position `p`.
    pub fn allowed_at(&self, p: u64) -> Result<Children, CantorError> {
        let seg = self.segment_of(p)?;
        Ok(if p - seg.start <= seg.free {
            Children::Range(seg.bound)
        } else {
            Children::Fixed(self.i)
        })
    }

    /// Check that `prefix` follows the pattern.
    pub fn check_prefix(&self, prefix: &[u64]) -> Result<(), CantorError> {
        for (j, &a) in prefix.iter().enumerate() {
            let p = j as u64 + 1;
            let ok = match self.allowed_at(p)? {
                Children::Fixed(i) => a == i,
                Children::Range(b) => a >= 1 && a <= b,
            };
            if !ok {
                return Err(CantorError::Inadmissible { position: p, digit: a });
            }
        }
        Ok(())
    }

    /// Insertion digit for the block starting at `n_k + 1`.
    pub fn insertion_digit(&self, k: usize) -> u64 {
        match &self.seq.bounds {
            None => self.d,
            Some(bs) => bs[k - 1].saturating_add(1),
        }
    }
}

/// A consumer of a digit stream (constant runs may be passed in bulk).
pub trait DigitSink {
    /// One digit.
    fn digit(&mut self, a: u64);
    /// `count` copies of `a`.
    fn run(&mut self, a: u64, count: u64) {
        for _ in 0..count {
            self.digit(a);
        }
    }
}

impl DigitSink for Vec<u64> {
    fn digit(&mut self, a: u64) {
        self.push(a);
    }
    fn run(&mut self, a: u64, count: u64) {
        self.resize(self.len() + count as usize, a);
    }
}

impl DigitSink for crate::exponents::BlockScanner {
    fn digit(&mut self, a: u64) {
        self.push(a);
    }
    fn run(&mut self, a: u64, count: u64) {
        self.push_run(a, count);
    }
}

/// Digits allowed after an admissible `prefix`.
pub fn admissible_children(spec: &CantorSpec, prefix: &[u64]) -> Result<Children, CantorError> {
    spec.check_prefix(prefix)?;
    spec.allowed_at(prefix.len() as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn finite_exponent_sequences() {
        let s = construct_sequences(&r(1, 2), &r(1, 1), 10).unwrap();
        assert_eq!(&s.n[..2], &[2, 8]);
        assert_eq!(&s.m[..2], &[5, 17]);
        assert!(s.check());
        let z = construct_sequences(&r(0, 1), &r(1, 1), 10).unwrap();
        assert_eq!(z.n[0], 34);
        assert_eq!(z.m[0], 69);
        assert!(construct_sequences(&r(2, 3), &r(1, 1), 5).is_err());
        let t = construct_sequences(&r(1, 3), &r(1, 1), 40).unwrap();
        assert!(t.len() >= 21);
        for k in 10..t.len() {
            let ratio = (t.m[k] - t.n[k]) as f64 / t.n[k] as f64;
            assert!((ratio - 1.0).abs() <= 0.05);
        }
    }

    #[test]
    fn infinite_sequences() {
        let s = construct_sequences_infinite(&r(1, 2), 6).unwrap();
        assert_eq!(s.n[1], 6); // n_2 = n_1^1 + 2 n_1
        assert_eq!(s.m[0], 3);
        assert!(s.check());
        let z = construct_sequences_infinite(&r(0, 1), 6).unwrap();
        assert_eq!(z.n[0], 16);
        assert_eq!(z.m[0], 256);
        let o = construct_sequences_infinite(&r(1, 1), 8).unwrap();
        assert_eq!(&o.m[..3], &[2, 6, 24]);
        assert!(o.check());
    }

    #[test]
    fn runlength_sequences() {
        let s = construct_sequences_runlength(&r(1, 3), &r(1, 2), 30).unwrap();
        assert!(s.check());
        let k = 19;
        let l = (s.m[k] - s.n[k]) as f64;
        assert!((l / s.n[k + 1] as f64 - 0.5).abs() <= 0.05);
        assert!((l / s.m[k] as f64 - 0.5).abs() <= 0.05);
        assert!(construct_sequences_runlength(&r(2, 5), &r(1, 2), 5).is_err());
    }

    #[test]
    fn admissibility() {
        let seq = construct_sequences(&r(1, 2), &r(1, 1), 4).unwrap();
        let spec = CantorSpec::new(seq, 3, 1, 4).unwrap();
        // n_1 = 2, m_1 = 5: positions 3..5 are fixed.
        assert_eq!(admissible_children(&spec, &[2, 3]).unwrap(), Children::Fixed(1));
        assert_eq!(admissible_children(&spec, &[2, 3, 1, 1, 1]).unwrap(), Children::Range(3));
        assert!(matches!(
            admissible_children(&spec, &[2, 3, 2]),
            Err(CantorError::Inadmissible { position: 3, digit: 2 })
        ));
    }
}
