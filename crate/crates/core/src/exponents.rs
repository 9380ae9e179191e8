//! Block decomposition of a digit string against the target digit `i` and
//! finite-scale estimators of the uniform exponent `ν̂(x)` and the asymptotic
//! exponent `ν(x)` of approximation of `y = [i, i, …]` by the Gauss orbit of
//! `x`.
//!
//! A *raw block* `(n′, m′)` is a maximal run `a_{n′+1} = … = a_{m′} = i`.
//! *Record blocks* are selected greedily: the first raw block, then each
//! first raw block strictly longer than the previous record.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cf::{continuant_pair, DigitSeq, QuadraticTarget, SeqEnd};
use crate::num::ln_ratio;

/// Errors of the exponent estimators.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExponentError {
    /// The target digit never occurs.
    #[error("digit {0} never occurs in the sequence")]
    NoBlocks(u64),
    /// Fewer than two closed record blocks lie inside the horizon.
    #[error("need at least two record blocks within the horizon, found {0}")]
    InsufficientBlocks(usize),
    /// The digits needed by a bracket are not certified.
    #[error("digit sequence exhausted: need {needed} certified digits, have {have}")]
    Exhausted {
        /// Digits required.
        needed: usize,
        /// Digits available.
        have: usize,
    },
    /// The sequence is empty.
    #[error("empty digit sequence")]
    Empty,
}

/// A run `a_{n+1} = … = a_m = i` (so its length is `m − n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    /// Number of digits before the run.
    pub n: u64,
    /// Position of the last digit of the run.
    pub m: u64,
    /// True if the run touches the end of an open (not terminated) sequence
    /// and might continue.
    pub open: bool,
}

impl Block {
    /// Run length `m − n`.
    pub fn len(&self) -> u64 {
        self.m - self.n
    }

    /// Always false (blocks are non-empty); provided for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.m == self.n
    }
}

/// Raw and record blocks of a digit string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Target digit.
    pub i: u64,
    /// All maximal `i`-runs in order (empty when scanned in streaming mode
    /// without retention).
    pub raw_blocks: Vec<Block>,
    /// Record blocks: strictly increasing lengths.
    pub record_blocks: Vec<Block>,
    /// Number of digits scanned.
    pub len: u64,
}

/// Streaming block scanner: feed digits one at a time.
#[derive(Clone, Debug)]
pub struct BlockScanner {
    i: u64,
    pos: u64,
    run_start: Option<u64>,
    keep_raw: bool,
    raw: Vec<Block>,
    records: Vec<Block>,
    raw_count: u64,
}

impl BlockScanner {
    /// New scanner for target digit `i`; `keep_raw` retains every raw block.
    pub fn new(i: u64, keep_raw: bool) -> Self {
        BlockScanner { i, pos: 0, run_start: None, keep_raw, raw: Vec::new(), records: Vec::new(), raw_count: 0 }
    }

    fn close(&mut self, b: Block) {
        self.raw_count += 1;
        if self.keep_raw {
            self.raw.push(b);
        }
        match self.records.last() {
            Some(last) if b.len() <= last.len() => {}
            _ => self.records.push(b),
        }
    }

    /// Consume one digit.
    #[inline]
    pub fn push(&mut self, a: u64) {
        if a == self.i {
            if self.run_start.is_none() {
                self.run_start = Some(self.pos);
            }
        } else if let Some(s) = self.run_start.take() {
            self.close(Block { n: s, m: self.pos, open: false });
        }
        self.pos += 1;
    }

    /// Consume `count` copies of digit `a` at once.
    #[inline]
    pub fn push_run(&mut self, a: u64, count: u64) {
        if count == 0 {
            return;
        }
        self.push(a);
        self.pos += count - 1;
    }

    /// Number of digits consumed.
    pub fn position(&self) -> u64 {
        self.pos
    }

    /// Records closed so far.
    pub fn records(&self) -> &[Block] {
        &self.records
    }

    /// Number of raw blocks closed so far.
    pub fn raw_count(&self) -> u64 {
        self.raw_count
    }

    /// Finish the scan. A run reaching the end is closed as well and flagged
    /// `open` unless the sequence is known to be complete.
    pub fn finish(mut self, complete: bool) -> BlockDecomposition {
        if let Some(s) = self.run_start.take() {
            self.close(Block { n: s, m: self.pos, open: !complete });
        }
        BlockDecomposition { i: self.i, raw_blocks: self.raw, record_blocks: self.records, len: self.pos }
    }
}

/// Decompose `d` into maximal `i`-runs and record blocks.
pub fn decompose(d: &DigitSeq, i: u64) -> Result<BlockDecomposition, ExponentError> {
    if d.is_empty() {
        return Err(ExponentError::Empty);
    }
    let mut sc = BlockScanner::new(i, true);
    for &a in &d.digits {
        sc.push(a);
    }
    let bd = sc.finish(d.end == SeqEnd::Terminated);
    if bd.raw_blocks.is_empty() {
        return Err(ExponentError::NoBlocks(i));
    }
    Ok(bd)
}

/// Finite-scale exponent estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentEstimate {
    /// Tail minimum of `(m_k − n_k)/n_{k+1}`.
    pub nu_hat_est: f64,
    /// Tail maximum of `(m_k − n_k)/n_k`.
    pub nu_est: f64,
    /// Number of closed record blocks inside the horizon.
    pub k_used: usize,
}

/// Estimate `(ν̂, ν)` from the closed record blocks with `m_k ≤ horizon`.
///
/// With `K` such records the tail is `k ≥ ⌊(K−1)/2⌋`; `ν̂` uses consecutive
/// pairs inside the tail and `ν` the tail records with `n_k > 0`.
pub fn exponent_estimates(bd: &BlockDecomposition, horizon: u64) -> Result<ExponentEstimate, ExponentError> {
    let recs: Vec<Block> = bd.record_blocks.iter().copied().filter(|b| !b.open && b.m <= horizon).collect();
    estimates_from_records(&recs)
}

/// The estimator applied to an explicit list of record blocks.
pub fn estimates_from_records(recs: &[Block]) -> Result<ExponentEstimate, ExponentError> {
    let k = recs.len();
    if k < 2 {
        return Err(ExponentError::InsufficientBlocks(k));
    }
    let tail = (k - 1) / 2;
    let mut nu_hat = f64::INFINITY;
    for w in recs[tail..].windows(2) {
        nu_hat = nu_hat.min(w[0].len() as f64 / w[1].n as f64);
    }
    let mut nu = 0.0f64;
    for b in &recs[tail..] {
        if b.n > 0 {
            nu = nu.max(b.len() as f64 / b.n as f64);
        }
    }
    Ok(ExponentEstimate { nu_hat_est: nu_hat, nu_est: nu, k_used: k })
}

/// What follows the common prefix `i^m` of `T^n(x)` with `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NextDigit {
    /// A digit `j ≠ i`.
    Digit(u64),
    /// The expansion terminates (rational `x`): `T^{n+m}(x) = 0`.
    End,
}

/// Exact bracket of `|T^n(x) − y|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceBracket {
    /// Length of the common prefix of `T^n(x)` with `(i, i, …)`.
    pub m: usize,
    /// What follows the common prefix.
    pub next: NextDigit,
    /// Certified lower bound.
    pub lower: BigRational,
    /// Certified strict upper bound `|I_m(y)|`.
    pub upper: BigRational,
}

/// Certified bracket for a point whose orbit agrees with `y` on exactly `m`
/// digits and then continues with `next`.
///
/// Writing `T^n x = (P_m + P_{m−1} t)/(Q_m + Q_{m−1} t)` with `t = T^{n+m} x`
/// and likewise for `y` (whose tail is `y` itself),
/// `|T^n x − y| = |t − y| / ((Q_m + Q_{m−1} t)(Q_m + Q_{m−1} y))`; the bound
/// follows from the range of `t` allowed by `next` and a rational enclosure
/// of `y`.
pub fn bracket_for(t: &QuadraticTarget, m: usize, next: NextDigit) -> DistanceBracket {
    let (qm, qm1) = continuant_pair(&alloc::vec![t.i; m]);
    let qm_r = BigRational::from_integer(qm.clone().into());
    let qm1_r = BigRational::from_integer(qm1.clone().into());
    let upper = crate::cf::interval_length(&qm, &qm1);
    let one = BigRational::one();
    let (t_lo, t_hi) = match next {
        NextDigit::Digit(j) => (
            BigRational::new(BigInt::one(), BigInt::from(j) + 1),
            BigRational::new(BigInt::one(), BigInt::from(j)),
        ),
        NextDigit::End => (BigRational::from_integer(0.into()), BigRational::from_integer(0.into())),
    };
    let gap = if t_hi < t.y_lo {
        &t.y_lo - &t_hi
    } else if t_lo > t.y_hi {
        &t_lo - &t.y_hi
    } else {
        BigRational::from_integer(0.into())
    };
    let den = (&qm_r + &qm1_r * &t_hi) * (&qm_r + &qm1_r * &t.y_hi);
    let lower = gap / den;
    debug_assert!(lower < upper || m == 0 && lower <= one);
    DistanceBracket { m, next, lower, upper }
}

/// Bracket `|T^n(x) − y|` from the maximal common prefix of `shift(d, n)`
/// with `(i, i, …)`.
pub fn distance_bracket(d: &DigitSeq, n: usize, t: &QuadraticTarget) -> Result<DistanceBracket, ExponentError> {
    let digits = &d.digits;
    if digits.len() < n + 1 && d.end != SeqEnd::Terminated {
        return Err(ExponentError::Exhausted { needed: n + 1, have: digits.len() });
    }
    let mut m = 0usize;
    while n + m < digits.len() && digits[n + m] == t.i {
        m += 1;
    }
    let next = if n + m < digits.len() {
        NextDigit::Digit(digits[n + m])
    } else if d.end == SeqEnd::Terminated {
        NextDigit::End
    } else {
        return Err(ExponentError::Exhausted { needed: n + m + 1, have: digits.len() });
    };
    Ok(bracket_for(t, m, next))
}

/// Outcome of the membership test at one scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitOutcome {
    /// Some orbit point is certainly within the threshold.
    Hit,
    /// No orbit point can be within the threshold.
    Miss,
    /// The threshold falls inside a bracket.
    Indeterminate,
}

/// Detailed result of [`uniform_hit_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HitCheck {
    /// Combined verdict.
    pub outcome: HitOutcome,
    /// Sufficient test: some upper bracket is below the threshold.
    pub sufficient: bool,
    /// Necessary test: some lower bracket is below the threshold.
    pub necessary: bool,
    /// `ν̂ · log |I_N(y)|`.
    pub ln_threshold: f64,
    /// Smallest `log` upper bracket over `n ∈ [1, N]`.
    pub ln_best_upper: f64,
    /// Smallest `log` lower bracket over `n ∈ [1, N]`.
    pub ln_best_lower: f64,
}

/// Relative pad applied to floating logarithms of exact quantities before a
/// decision is made (they are accurate to a few ulps).
const LOG_PAD: f64 = 1e-12;

/// Is there `n ∈ [1, N]` with `|T^n(x) − y| < |I_N(y)|^{ν̂}`?
///
/// Brackets are exact rationals; only their logarithms are compared with the
/// threshold, with a relative pad, so a verdict is only given when it is
/// robust (rounded down for hits, up for misses).
pub fn uniform_hit_check(d: &DigitSeq, t: &QuadraticTarget, horizon: usize, nu_hat: f64) -> Result<HitCheck, ExponentError> {
    let digits = &d.digits;
    let len = digits.len();
    if len < horizon + 1 {
        return Err(ExponentError::Exhausted { needed: horizon + 1, have: len });
    }
    // run[k] = length of the i-run starting at 0-based index k.
    let mut run = alloc::vec![0u32; len + 1];
    for k in (0..len).rev() {
        run[k] = if digits[k] == t.i { run[k + 1] + 1 } else { 0 };
    }
    // Per prefix length, the continuations that can give the smallest lower bound.
    let mut worst: BTreeMap<usize, (Option<u64>, Option<u64>, bool)> = BTreeMap::new();
    let mut best_m = 0usize;
    for n in 1..=horizon {
        let m = run[n] as usize;
        let idx = n + m;
        let next = if idx < len {
            NextDigit::Digit(digits[idx])
        } else if d.end == SeqEnd::Terminated {
            NextDigit::End
        } else {
            return Err(ExponentError::Exhausted { needed: idx + 1, have: len });
        };
        best_m = best_m.max(m);
        let e = worst.entry(m).or_insert((None, None, false));
        match next {
            NextDigit::Digit(j) if j < t.i => e.0 = Some(e.0.map_or(j, |v: u64| v.max(j))),
            NextDigit::Digit(j) => e.1 = Some(e.1.map_or(j, |v: u64| v.min(j))),
            NextDigit::End => e.2 = true,
        }
    }
    let ln_threshold = nu_hat * t.ln_interval_length(horizon);
    let ln_best_upper = ln_ratio(&t.interval_length(best_m));
    let mut ln_best_lower = f64::INFINITY;
    for (&m, &(below, above, end)) in &worst {
        let mut cands = Vec::new();
        if let Some(j) = below {
            cands.push(NextDigit::Digit(j));
        }
        if let Some(j) = above {
            cands.push(NextDigit::Digit(j));
        }
        if end {
            cands.push(NextDigit::End);
        }
        for c in cands {
            let b = bracket_for(t, m, c);
            ln_best_lower = ln_best_lower.min(ln_ratio(&b.lower));
        }
    }
    let pad = LOG_PAD * (1.0 + ln_threshold.abs());
    // With ν̂ = 0 the threshold is exactly 1 and every distance is < |I_0(y)| = 1.
    let sufficient = nu_hat == 0.0 || ln_best_upper <= ln_threshold - pad;
    let necessary = sufficient || ln_best_lower < ln_threshold + pad;
    let outcome = if sufficient {
        HitOutcome::Hit
    } else if !necessary {
        HitOutcome::Miss
    } else {
        HitOutcome::Indeterminate
    };
    Ok(HitCheck { outcome, sufficient, necessary, ln_threshold, ln_best_upper, ln_best_lower })
}
