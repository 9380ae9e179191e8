//! Random streams and Lebesgue-distributed continued-fraction digits.
//!
//! Each sample uses its own ChaCha8 stream derived from `(seed, index)`, so
//! results do not depend on how samples are scheduled across threads.
//!
//! Digits of a uniform `x ∈ [0,1)` are drawn sequentially from the exact
//! conditional law: given `a_1..a_n` with `r = q_{n−1}/q_n`,
//! `P(a_{n+1} ≥ k) = |⋃_{a≥k} I_{n+1}| / |I_n| = (1 + r)/(k + r)`, so
//! `a_{n+1} = ⌊(1 + r)/U − r⌋` for `U` uniform on `(0, 1]`. This is the
//! digit sequence of an exactly uniform point, with no precision budget.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// The ChaCha8 stream for sample `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on `(0, 1]` with 53 random bits.
#[inline]
pub fn uniform_open0<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform01<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Digit stream of a Lebesgue-uniform point.
#[derive(Clone, Debug)]
pub struct LebesgueDigits<R> {
    rng: R,
    r: f64,
}

impl<R: RngCore> LebesgueDigits<R> {
    /// New stream driven by `rng`.
    pub fn new(rng: R) -> Self {
        LebesgueDigits { rng, r: 0.0 }
    }

    /// Next partial quotient.
    #[inline]
    pub fn next_digit(&mut self) -> u64 {
        let u = uniform_open0(&mut self.rng);
        let x = (1.0 + self.r) / u - self.r;
        // x ≥ 1 always; the floor fits u64 because u ≥ 2^{-53}.
        let a = (libm::floor(x) as u64).max(1);
        self.r = 1.0 / (a as f64 + self.r);
        a
    }
}

impl<R: RngCore> Iterator for LebesgueDigits<R> {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        Some(self.next_digit())
    }
}

/// Longest constant run among the first `n` digits of a uniform point.
pub fn lebesgue_max_run<R: RngCore>(rng: R, n: u64) -> u64 {
    let mut it = LebesgueDigits::new(rng);
    let (mut best, mut cur, mut prev) = (0u64, 0u64, 0u64);
    for _ in 0..n {
        let a = it.next_digit();
        cur = if a == prev { cur + 1 } else { 1 };
        prev = a;
        best = best.max(cur);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<u64> = LebesgueDigits::new(stream_rng(7, 0)).take(50).collect();
        let b: Vec<u64> = LebesgueDigits::new(stream_rng(7, 0)).take(50).collect();
        let c: Vec<u64> = LebesgueDigits::new(stream_rng(7, 1)).take(50).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn first_digit_follows_lebesgue_law() {
        // P(a_1 = 1) = 1/2, P(a_1 = 2) = 1/6.
        let mut rng = stream_rng(1, 0);
        let n = 200_000;
        let (mut c1, mut c2) = (0u32, 0u32);
        for _ in 0..n {
            match LebesgueDigits::new(&mut rng).next_digit() {
                1 => c1 += 1,
                2 => c2 += 1,
                _ => {}
            }
        }
        let f1 = c1 as f64 / n as f64;
        let f2 = c2 as f64 / n as f64;
        assert!((f1 - 0.5).abs() < 0.005, "{f1}");
        assert!((f2 - 1.0 / 6.0).abs() < 0.005, "{f2}");
    }

    #[test]
    fn second_digit_conditional_law() {
        // Given a_1 = 1: P(a_2 = 1 | a_1 = 1) = |I(1,1)|/|I(1)| = (1/6)/(1/2) = 1/3.
        let mut rng = stream_rng(2, 0);
        let (mut n1, mut hit) = (0u32, 0u32);
        for _ in 0..300_000 {
            let mut it = LebesgueDigits::new(&mut rng);
            if it.next_digit() == 1 {
                n1 += 1;
                if it.next_digit() == 1 {
                    hit += 1;
                }
            }
        }
        let f = hit as f64 / n1 as f64;
        assert!((f - 1.0 / 3.0).abs() < 0.006, "{f}");
    }
}
