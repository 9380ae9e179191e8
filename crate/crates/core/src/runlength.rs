//! The maximal run-length function
//! `R_n(x) = max{ l : a_{j+1} = … = a_{j+l} for some 0 ≤ j ≤ n − l }`
//! and finite-scale estimators of `liminf R_n/n` and `limsup R_n/n`.

use alloc::vec::Vec;

/// A maximal constant run of digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    /// 1-based position of the first digit of the run.
    pub start: usize,
    /// Number of digits in the run.
    pub length: usize,
    /// The repeated digit.
    pub digit: u64,
}

/// `R_1, …, R_{n_max}` together with all maximal constant runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunProfile {
    /// Number of digits profiled.
    pub n_max: usize,
    /// `r[n-1] = R_n`.
    pub r: Vec<u32>,
    /// Maximal constant runs in order (the last one may be cut by the end of
    /// the data).
    pub blocks: Vec<Run>,
}

impl RunProfile {
    /// `R_n` for `1 ≤ n ≤ n_max`.
    pub fn at(&self, n: usize) -> u32 {
        self.r[n - 1]
    }
}

/// Errors of the ratio estimators.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RunLengthError {
    /// The selected tail window contains no index.
    #[error("the tail window contains no index")]
    EmptyWindow,
    /// The tail fraction is outside `(0, 1]`.
    #[error("tail fraction must lie in (0, 1]")]
    InvalidFraction,
}

/// Single left-to-right pass computing `R_n` for every prefix.
pub fn run_profile(digits: &[u64]) -> RunProfile {
    let mut r = Vec::with_capacity(digits.len());
    let mut blocks = Vec::new();
    let mut best = 0usize;
    let mut cur = 0usize;
    for (k, &a) in digits.iter().enumerate() {
        if k > 0 && a == digits[k - 1] {
            cur += 1;
        } else {
            if cur > 0 {
                blocks.push(Run { start: k - cur + 1, length: cur, digit: digits[k - 1] });
            }
            cur = 1;
        }
        best = best.max(cur);
        r.push(best as u32);
    }
    if cur > 0 {
        let n = digits.len();
        blocks.push(Run { start: n - cur + 1, length: cur, digit: digits[n - 1] });
    }
    RunProfile { n_max: digits.len(), r, blocks }
}

/// Window estimates of `liminf R_n/n` and `limsup R_n/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioEstimate {
    /// Minimum of `R_n/n` over the window.
    pub liminf_est: f64,
    /// Maximum of `R_n/n` over the window.
    pub limsup_est: f64,
    /// The window `[k_min, n_max]` of indices used.
    pub window: (usize, usize),
}

/// Default tail fraction of the ratio estimators.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

/// Min and max of `R_n/n` over `n` in the last `tail_fraction` of the profile,
/// i.e. over `n ∈ [max(1, ⌈n_max (1 − tail_fraction)⌉), n_max]`.
pub fn ratio_estimates(rp: &RunProfile, tail_fraction: f64) -> Result<RatioEstimate, RunLengthError> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(RunLengthError::InvalidFraction);
    }
    if rp.n_max == 0 {
        return Err(RunLengthError::EmptyWindow);
    }
    let k_min = (libm::ceil(rp.n_max as f64 * (1.0 - tail_fraction)) as usize).max(1);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in k_min..=rp.n_max {
        let v = rp.at(n) as f64 / n as f64;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(RatioEstimate { liminf_est: lo, limsup_est: hi, window: (k_min, rp.n_max) })
}
