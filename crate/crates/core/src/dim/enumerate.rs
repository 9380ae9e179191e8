//! Exhaustive enumeration of the partition sums
//!
//! ```text
//! Σ_{(a_1..a_f) ∈ {1..B}^f} (e^{scale} · q(a_1, …, a_f, i, …, i))^{−2ρ}
//! ```
//!
//! by depth-first recursion in log space: `log q_{k+1} = log q_k + log(a + r_k)`
//! and `r_{k+1} = 1/(a + r_k)`, where `r_k = q_{k−1}/q_k`.

use alloc::vec::Vec;

use crate::cf::QuadraticTarget;
use crate::num::Neumaier;

/// Default DFS node budget.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Largest number of leaves whose logarithms are cached for repeated sums.
const LEAF_CACHE_LIMIT: u64 = 1 << 23;

/// Shape of one partition sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumKernelSpec {
    /// Number of free digits ranging over `{1..B}`.
    pub free_length: usize,
    /// Number of trailing fixed digits `i`.
    pub tail_len: usize,
    /// The fixed digit `i`.
    pub tail_digit: u64,
    /// Extra logarithmic scale added to every `log q` (the `τ`-scale of the
    /// hat numbers, or 0).
    pub scale_log: f64,
}

/// Enumeration exceeded its node budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("enumeration needs {needed} nodes, budget is {budget}")]
pub struct BudgetExceeded {
    /// Nodes the enumeration would visit (saturating).
    pub needed: u64,
    /// Configured budget.
    pub budget: u64,
}

/// DFS nodes visited for `f` free digits over `{1..B}`: `Σ_{k=1..f} B^k`.
pub fn node_count(b: u64, f: usize) -> u64 {
    if b <= 1 {
        return f as u64 * b;
    }
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..f {
        level = level.saturating_mul(b);
        total = total.saturating_add(level);
        if total == u64::MAX {
            break;
        }
    }
    total
}

/// Visit every leaf with `(log q_f, r_f)` of the free part.
fn dfs(b: u64, depth: usize, lq: f64, r: f64, visit: &mut impl FnMut(f64, f64)) {
    if depth == 0 {
        visit(lq, r);
        return;
    }
    for a in 1..=b {
        let base = a as f64 + r;
        dfs(b, depth - 1, lq + libm::log(base), 1.0 / base, visit);
    }
}

/// Visit leaves whose first digit is `first`.
fn dfs_first(b: u64, f: usize, first: u64, visit: &mut impl FnMut(f64, f64)) {
    if f == 0 {
        visit(0.0, 0.0);
        return;
    }
    let base = first as f64;
    dfs(b, f - 1, libm::log(base), 1.0 / base, visit);
}

/// Pre-computed leaf logarithms `log(e^{scale} q_total)` of a partition sum.
#[derive(Clone, Debug)]
pub struct PartitionSum {
    b: u64,
    spec: SumKernelSpec,
    tail_lq: f64,
    tail_r: f64,
    /// Smallest leaf logarithm (a valid lower bound when leaves are not cached).
    min_log: f64,
    leaves: Option<Vec<f64>>,
}

impl PartitionSum {
    /// Prepare the sum; enumerates and caches leaves when small enough.
    pub fn new(b: u64, spec: SumKernelSpec, budget: u64) -> Result<Self, BudgetExceeded> {
        assert!(b >= 1, "alphabet bound must be at least 1");
        let needed = node_count(b, spec.free_length);
        if needed > budget {
            return Err(BudgetExceeded { needed, budget });
        }
        let target = crate::cf::target(spec.tail_digit.max(1));
        let (tail_lq, tail_r) = tail_factors(&target, spec.tail_len);
        let leaves_count = b.saturating_pow(spec.free_length as u32);
        let mut s = PartitionSum {
            b,
            spec,
            tail_lq,
            tail_r,
            min_log: 0.0,
            leaves: None,
        };
        // q_f ≥ F_{f+1} (all ones) and q_total ≥ q_f · Q_t: a safe lower bound.
        let (lf, _) = crate::cf::log_continuant(&alloc::vec![1u64; spec.free_length]);
        s.min_log = lf + tail_lq + spec.scale_log;
        if leaves_count <= LEAF_CACHE_LIMIT {
            let mut v = Vec::with_capacity(leaves_count as usize);
            for first in 1..=b {
                s.for_each_leaf(first, &mut |l| v.push(l));
                if spec.free_length == 0 {
                    break;
                }
            }
            s.min_log = v.iter().copied().fold(f64::INFINITY, f64::min);
            s.leaves = Some(v);
        }
        Ok(s)
    }

    fn for_each_leaf(&self, first: u64, out: &mut impl FnMut(f64)) {
        let (tl, tr, sc) = (self.tail_lq, self.tail_r, self.spec.scale_log);
        dfs_first(self.b, self.spec.free_length, first, &mut |lq, r| {
            // q_total = q_f Q_t + q_{f−1} Q_{t−1} = q_f Q_t (1 + r_f ρ_t).
            out(lq + tl + libm::log1p(r * tr) + sc);
        });
    }

    /// The kernel shape.
    pub fn spec(&self) -> &SumKernelSpec {
        &self.spec
    }

    /// Number of leaves.
    pub fn leaf_count(&self) -> u64 {
        self.b.saturating_pow(self.spec.free_length as u32)
    }

    /// Smallest `log q` over leaves (exact when cached, else a lower bound).
    pub fn min_log(&self) -> f64 {
        self.min_log
    }

    /// The sum restricted to leaves with first digit `first` (`1..=B`),
    /// shifted by `exp(2ρ·min_log)`; shifted partials merge by addition.
    pub fn partial_shifted(&self, first: u64, rho: f64) -> Neumaier {
        let mut acc = Neumaier::new();
        let shift = self.min_log;
        match &self.leaves {
            Some(v) => {
                let per = if self.spec.free_length == 0 {
                    v.len()
                } else {
                    v.len() / self.b as usize
                };
                let start = (first as usize - 1) * per;
                for &l in &v[start..start + per] {
                    acc.add(libm::exp(-2.0 * rho * (l - shift)));
                }
            }
            None => self.for_each_leaf(first, &mut |l| acc.add(libm::exp(-2.0 * rho * (l - shift)))),
        }
        acc
    }

    /// Log of the full sum at exponent `ρ`.
    pub fn log_sum(&self, rho: f64) -> f64 {
        let firsts = if self.spec.free_length == 0 { 1 } else { self.b };
        let mut acc = Neumaier::new();
        for first in 1..=firsts {
            acc.merge(&self.partial_shifted(first, rho));
        }
        libm::log(acc.total()) - 2.0 * rho * self.min_log
    }

    /// Log of the sum and its derivative in `ρ` (cached leaves only; falls
    /// back to a centred difference otherwise).
    pub fn log_sum_and_slope(&self, rho: f64) -> (f64, f64) {
        match &self.leaves {
            Some(v) => {
                let (mut w, mut wl) = (Neumaier::new(), Neumaier::new());
                for &l in v {
                    let e = libm::exp(-2.0 * rho * (l - self.min_log));
                    w.add(e);
                    wl.add(e * l);
                }
                let total = w.total();
                (
                    libm::log(total) - 2.0 * rho * self.min_log,
                    -2.0 * wl.total() / total,
                )
            }
            None => {
                let h = 1e-7;
                let f = self.log_sum(rho);
                let d = (self.log_sum(rho + h) - self.log_sum(rho - h)) / (2.0 * h);
                (f, d)
            }
        }
    }
}

/// `(log Q_t, Q_{t−1}/Q_t)` of a run of `t` copies of the target digit.
fn tail_factors(target: &QuadraticTarget, t: usize) -> (f64, f64) {
    target.ln_run_continuant(t)
}

/// Log of the partition sum at exponent `ρ`.
pub fn sum_power(b: u64, spec: SumKernelSpec, rho: f64, budget: u64) -> Result<f64, BudgetExceeded> {
    Ok(PartitionSum::new(b, spec, budget)?.log_sum(rho))
}

/// Root of `log_sum(ρ) = 0` with a bracket of width at most `tol`.
///
/// Returns `(value, lo, hi)`; the value is 0 when the sum at `ρ = 0` is at
/// most 1. The log-sum is convex and strictly decreasing, so Newton steps
/// from the left stay left of the root; they are safeguarded by bisection.
pub fn root(ps: &PartitionSum, tol: f64) -> (f64, f64, f64) {
    let f0 = ps.log_sum(0.0);
    if f0 <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    while ps.log_sum(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    let mut x = lo;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let (f, d) = ps.log_sum_and_slope(x);
        if f > 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let newton = if d < 0.0 { x - f / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        // Once Newton has landed, certify a tight bracket around it.
        if f.abs() < 1e-14 {
            let eps = tol / 4.0;
            if ps.log_sum((x - eps).max(lo)) > 0.0 {
                lo = (x - eps).max(lo);
            }
            if ps.log_sum((x + eps).min(hi)) <= 0.0 {
                hi = (x + eps).min(hi);
            }
        }
    }
    let v = 0.5 * (lo + hi);
    (v, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: usize, t: usize, i: u64) -> SumKernelSpec {
        SumKernelSpec {
            free_length: f,
            tail_len: t,
            tail_digit: i,
            scale_log: 0.0,
        }
    }

    #[test]
    fn hand_computed_sum() {
        // q_2 = a_1 a_2 + 1 over {1,2}^2 is {2,3,3,5}.
        let v = sum_power(2, spec(2, 0, 1), 1.0, DEFAULT_BUDGET).unwrap();
        let expect = 1.0 / 4.0 + 2.0 / 9.0 + 1.0 / 25.0;
        assert!((v - libm::log(expect)).abs() < 1e-14);
    }

    #[test]
    fn single_letter_is_one_at_zero() {
        for f in 0..6 {
            assert_eq!(sum_power(1, spec(f, 3, 2), 0.0, DEFAULT_BUDGET).unwrap(), 0.0);
        }
    }

    #[test]
    fn tail_matches_exact_continuants() {
        use crate::cf::continuant_pair;
        use crate::num::ln_biguint;
        let ps = PartitionSum::new(3, spec(3, 4, 2), DEFAULT_BUDGET).unwrap();
        let mut expect = Neumaier::new();
        for a in 1..=3u64 {
            for b in 1..=3u64 {
                for c in 1..=3u64 {
                    let (q, _) = continuant_pair(&[a, b, c, 2, 2, 2, 2]);
                    expect.add(libm::exp(-1.4 * ln_biguint(&q)));
                }
            }
        }
        assert!((ps.log_sum(0.7) - libm::log(expect.total())).abs() < 1e-13);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            sum_power(10, spec(12, 0, 1), 1.0, DEFAULT_BUDGET),
            Err(BudgetExceeded { .. })
        ));
        assert_eq!(node_count(2, 3), 14);
    }

    #[test]
    fn uncached_path_matches_cached() {
        let s = spec(3, 2, 1);
        let cached = PartitionSum::new(3, s, DEFAULT_BUDGET).unwrap();
        let mut uncached = cached.clone();
        uncached.leaves = None;
        for rho in [0.0, 0.3, 0.9] {
            assert!((cached.log_sum(rho) - uncached.log_sum(rho)).abs() < 1e-13);
        }
    }

    #[test]
    fn root_satisfies_equality() {
        let ps = PartitionSum::new(2, spec(10, 0, 1), DEFAULT_BUDGET).unwrap();
        let (v, lo, hi) = root(&ps, 1e-12);
        assert!(hi - lo <= 1e-12 && lo <= v && v <= hi);
        assert!(ps.log_sum(v).abs() < 1e-9);
        assert!(ps.log_sum(lo) >= 0.0 && ps.log_sum(hi) <= 0.0);
    }
}
