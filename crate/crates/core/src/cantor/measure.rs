//! The mass distribution `μ` on a Cantor set.
//!
//! `μ` is a product over segments `(m_{k−1}, m_k]`: a segment word `w` (its
//! free digits followed by the run of `i`) receives weight
//! `q_{l_k}(w)^{−2s̃_k}`, where `s̃_k` makes the segment weights sum to 1.
//! Masses of prefixes that end inside a segment are sums over all
//! completions, evaluated in closed form: with `r = q_{j−1}/q_j` of the
//! free digits read so far and `rem` free digits left,
//!
//! ```text
//! Σ_{completions} q_l^{−2s} = q_j^{−2s} · G_rem(r),
//! G_0(r) = (Q_t + r Q_{t−1})^{−2s},   G_{j+1}(r) = Σ_a (a + r)^{−2s} G_j(1/(a + r)),
//! ```
//!
//! so `G_rem = L_s^{rem} G_0` for the transfer operator `L_s`. `G_rem` is
//! collocated on Chebyshev nodes for `rem ≤ 64`; beyond that the iterates
//! have aligned with the leading eigenfunction and grow by the leading
//! eigenvalue per step.
//!
//! Masses are carried as natural logarithms in `f64`.

use alloc::vec;
use alloc::vec::Vec;

use super::{CantorError, CantorSpec, Children, Segment};
use crate::cf::{continuant_pair, interval_length, log_continuant};
use crate::dim::enumerate::{self, node_count, PartitionSum, SumKernelSpec};
use crate::dim::operator::{Alphabet, Collocation, OperatorMatrix, EIGEN_MAX_ITER, EIGEN_TOL};
use crate::dim::DimError;
use crate::num::ln_ratio;

/// Number of exactly collocated iterates `G_1..G_K`.
pub const EXACT_ITERATES: usize = 64;

/// Largest enumeration used to solve for `s̃` directly.
const ENUMERATION_NODES: u64 = 4_000_000;

/// Tolerance of `s̃`.
const S_TOL: f64 = 1e-12;

/// Per-segment data: `s̃` and the collocated partial sums `G_j`.
#[derive(Clone, Debug)]
pub struct SegmentKernel {
    /// The segment.
    pub seg: Segment,
    /// `s̃_k`.
    pub s: f64,
    /// Bracket of `s̃_k`.
    pub s_bracket: (f64, f64),
    /// `log Q_t` of the run.
    ln_q_tail: f64,
    /// `Q_{t−1}/Q_t` of the run.
    rho_tail: f64,
    coll: Collocation,
    /// `(log scale, node values / scale)` of `G_j / Q_t^{−2s}` for
    /// `j = 0..=min(free, K)`.
    iters: Vec<(f64, Vec<f64>)>,
    /// Log of the leading eigenvalue of `L_s` (0 when unused).
    ln_lambda: f64,
    /// `log G_free(0)`: the normalizer of the segment.
    ln_z: f64,
}

impl SegmentKernel {
    /// Build the kernel for `seg` with run digit `i`.
    pub fn new(seg: Segment, i: u64) -> Result<Self, CantorError> {
        let target = crate::cf::target(i);
        let (ln_q_tail, rho_tail) = target.ln_run_continuant(seg.tail as usize);
        let coll = Collocation::new(crate::dim::operator::DEFAULT_DEGREE);
        let (s, s_bracket) = solve_s(&seg, i, &coll, rho_tail, ln_q_tail)?;
        let (iters, ln_lambda) = iterates(&seg, &coll, s, rho_tail)?;
        let mut k = SegmentKernel {
            seg,
            s,
            s_bracket,
            ln_q_tail,
            rho_tail,
            coll,
            iters,
            ln_lambda,
            ln_z: 0.0,
        };
        k.ln_z = k.ln_g(seg.free, 0.0);
        Ok(k)
    }

    /// `log G_rem(r)` including the run factor `Q_t^{−2s}`.
    pub fn ln_g(&self, rem: u64, r: f64) -> f64 {
        let base = -2.0 * self.s * self.ln_q_tail;
        if rem == 0 {
            return base - 2.0 * self.s * libm::log1p(r * self.rho_tail);
        }
        let kmax = (self.iters.len() - 1) as u64;
        let (j, extra) = if rem <= kmax {
            (rem as usize, 0.0)
        } else {
            (kmax as usize, (rem - kmax) as f64 * self.ln_lambda)
        };
        let (scale, vals) = &self.iters[j];
        base + scale + extra + libm::log(self.coll.eval(vals, r))
    }

    /// `log G_free(0)` (≈ 0 at the solved `s̃`).
    pub fn ln_z(&self) -> f64 {
        self.ln_z
    }

    /// Node values of the stationary conditional density shape (the last
    /// exact iterate), with its collocation.
    pub fn stationary_shape(&self) -> (&Collocation, &[f64]) {
        (&self.coll, &self.iters[self.iters.len() - 1].1)
    }

    /// Number of exactly collocated iterates (beyond it `G` scales by `λ`).
    pub fn exact_len(&self) -> u64 {
        (self.iters.len() - 1) as u64
    }

    /// Log weight of free digit `a` given state `r` and `rem` free digits
    /// left (including this one): `−2s log(a + r) + log G_{rem−1}(1/(a+r))`.
    pub fn ln_child_weight(&self, a: u64, r: f64, rem: u64) -> f64 {
        let base = a as f64 + r;
        -2.0 * self.s * libm::log(base) + self.ln_g(rem - 1, 1.0 / base)
    }
}

/// Collocated iterates of `G_j` (without the `Q_t^{−2s}` factor) and the
/// leading eigenvalue.
fn iterates(seg: &Segment, coll: &Collocation, s: f64, rho: f64) -> Result<(Vec<(f64, Vec<f64>)>, f64), CantorError> {
    let g0: Vec<f64> = coll
        .nodes()
        .iter()
        .map(|&x| libm::exp(-2.0 * s * libm::log1p(x * rho)))
        .collect();
    let mut out = vec![(0.0, g0)];
    let kmax = (seg.free as usize).min(EXACT_ITERATES);
    if kmax == 0 {
        return Ok((out, 0.0));
    }
    let m = OperatorMatrix::new(coll, Alphabet::Finite(seg.bound), s).map_err(DimError::from)?;
    let mut buf = vec![0.0; coll.len()];
    for _ in 0..kmax {
        let (scale, v) = out.last().expect("non-empty");
        m.apply(v, &mut buf);
        let norm = buf.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let next: Vec<f64> = buf.iter().map(|x| x / norm).collect();
        out.push((scale + libm::log(norm), next));
    }
    let ln_lambda = if (seg.free as usize) > EXACT_ITERATES {
        let (lambda, _) = m.leading_eigen(EIGEN_TOL, EIGEN_MAX_ITER).map_err(DimError::from)?;
        libm::log(lambda)
    } else {
        0.0
    };
    Ok((out, ln_lambda))
}

/// Solve `Σ_{free words} q_l(w, i^t)^{−2s} = 1` for `s`.
fn solve_s(seg: &Segment, i: u64, coll: &Collocation, rho: f64, ln_q_tail: f64) -> Result<(f64, (f64, f64)), CantorError> {
    if seg.free == 0 || seg.bound <= 1 {
        return Ok((0.0, (0.0, 0.0)));
    }
    if node_count(seg.bound, seg.free as usize) <= ENUMERATION_NODES {
        let spec = SumKernelSpec {
            free_length: seg.free as usize,
            tail_len: seg.tail as usize,
            tail_digit: i,
            scale_log: 0.0,
        };
        let ps = PartitionSum::new(seg.bound, spec, ENUMERATION_NODES).map_err(DimError::from)?;
        let (v, lo, hi) = enumerate::root(&ps, S_TOL);
        return Ok((v, (lo, hi)));
    }
    // log G_free(0; s), decreasing in s.
    let f = |s: f64| -> Result<f64, CantorError> {
        let (it, ln_lambda) = iterates(seg, coll, s, rho)?;
        let kmax = (it.len() - 1) as u64;
        let (scale, vals) = &it[kmax as usize];
        let extra = (seg.free - kmax) as f64 * ln_lambda;
        Ok(-2.0 * s * ln_q_tail + scale + extra + libm::log(coll.eval(vals, 0.0)))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while f(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return Err(CantorError::OutOfRange("segment exponent above 64".into()));
        }
    }
    // Illinois iteration on the sign-changing bracket, then a final
    // two-sided check around the estimate.
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    let mut side = 0i8;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        if hi - lo <= S_TOL {
            break;
        }
        x = (lo * fhi - hi * flo) / (fhi - flo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx > 0.0 {
            lo = x;
            flo = fx;
            if side == 1 {
                fhi *= 0.5;
            }
            side = 1;
        } else {
            hi = x;
            fhi = fx;
            if side == -1 {
                flo *= 0.5;
            }
            side = -1;
        }
        if fx.abs() < 1e-15 {
            break;
        }
    }
    if hi - lo > S_TOL {
        let (a, b) = (x - 0.5 * S_TOL, x + 0.5 * S_TOL);
        if a > lo && b < hi && f(a)? > 0.0 && f(b)? <= 0.0 {
            lo = a;
            hi = b;
        }
    }
    Ok((x.clamp(lo, hi), (lo, hi)))
}

/// The measure on a Cantor set, with kernels for its first segments.
#[derive(Clone, Debug)]
pub struct Measure {
    spec: CantorSpec,
    kernels: Vec<SegmentKernel>,
}

impl Measure {
    /// Build kernels for segments `1..=k_max` (capped at the constructed
    /// terms).
    pub fn new(spec: CantorSpec, k_max: usize) -> Result<Self, CantorError> {
        let k_max = k_max.min(spec.segments());
        let kernels = (1..=k_max)
            .map(|k| SegmentKernel::new(spec.segment(k), spec.i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Measure { spec, kernels })
    }

    /// The underlying spec.
    pub fn spec(&self) -> &CantorSpec {
        &self.spec
    }

    /// Kernel of segment `k` (1-based).
    pub fn kernel(&self, k: usize) -> &SegmentKernel {
        &self.kernels[k - 1]
    }

    /// Number of prepared segments.
    pub fn segments(&self) -> usize {
        self.kernels.len()
    }

    /// Last position covered by the prepared segments.
    pub fn max_depth(&self) -> u64 {
        self.kernels.last().map_or(0, |k| k.seg.end())
    }

    /// The per-segment exponents `s̃_k`.
    pub fn exponents(&self) -> Vec<f64> {
        self.kernels.iter().map(|k| k.s).collect()
    }

    /// A cursor at the root.
    pub fn cursor(&self) -> Cursor<'_> {
        Cursor {
            measure: self,
            pos: 0,
            k: 1,
            p: 0,
            base_ln: 0.0,
            ln_q: 0.0,
            r: 0.0,
        }
    }

    /// Cursor after `prefix` (checked against the pattern).
    pub fn walk(&self, prefix: &[u64]) -> Result<Cursor<'_>, CantorError> {
        let mut c = self.cursor();
        for &a in prefix {
            c.push(a)?;
        }
        Ok(c)
    }
}

/// Incremental position in the digit tree with its log-mass.
#[derive(Clone, Debug)]
pub struct Cursor<'a> {
    measure: &'a Measure,
    pos: u64,
    /// Segment containing position `pos + 1`.
    k: usize,
    /// Digits read inside segment `k`.
    p: u64,
    /// Log-mass of all completed segments.
    base_ln: f64,
    /// `log q` of the free digits read in segment `k`.
    ln_q: f64,
    /// `q_{j−1}/q_j` of the free digits read in segment `k`.
    r: f64,
}

impl<'a> Cursor<'a> {
    /// Digits read.
    pub fn depth(&self) -> u64 {
        self.pos
    }

    /// Completed segments.
    pub fn boundaries(&self) -> usize {
        self.k - 1
    }

    fn kernel(&self) -> Result<&'a SegmentKernel, CantorError> {
        self.measure
            .kernels
            .get(self.k - 1)
            .ok_or(CantorError::BeyondSequence(self.pos + 1))
    }

    /// Log-mass `log μ(I_depth)` of the current cylinder.
    pub fn ln_mass(&self) -> f64 {
        let Ok(kn) = self.kernel() else { return self.base_ln };
        if self.p == 0 {
            return self.base_ln;
        }
        let rem = kn.seg.free.saturating_sub(self.p);
        self.base_ln - 2.0 * kn.s * self.ln_q + kn.ln_g(rem, self.r) - kn.ln_z
    }

    /// Digits allowed next.
    pub fn children(&self) -> Result<Children, CantorError> {
        let kn = self.kernel()?;
        Ok(if self.p < kn.seg.free {
            Children::Range(kn.seg.bound)
        } else {
            Children::Fixed(self.measure.spec.i)
        })
    }

    /// Free digits left in the current segment (0 inside a run).
    pub fn free_left(&self) -> Result<u64, CantorError> {
        let kn = self.kernel()?;
        Ok(kn.seg.free.saturating_sub(self.p))
    }

    /// State `r = q_{j−1}/q_j` of the free digits read in this segment.
    pub fn state(&self) -> f64 {
        self.r
    }

    /// Current kernel.
    pub fn current_kernel(&self) -> Result<&'a SegmentKernel, CantorError> {
        self.kernel()
    }

    /// Log-mass of the child obtained by appending `a` (which must be
    /// allowed).
    pub fn child_ln_mass(&self, a: u64) -> Result<f64, CantorError> {
        let mut c = self.clone();
        c.push(a)?;
        Ok(c.ln_mass())
    }

    /// Append one digit.
    pub fn push(&mut self, a: u64) -> Result<(), CantorError> {
        let kn = self.kernel()?;
        let ok = match self.children()? {
            Children::Fixed(i) => a == i,
            Children::Range(b) => a >= 1 && a <= b,
        };
        if !ok {
            return Err(CantorError::Inadmissible {
                position: self.pos + 1,
                digit: a,
            });
        }
        if self.p < kn.seg.free {
            let base = a as f64 + self.r;
            self.ln_q += libm::log(base);
            self.r = 1.0 / base;
        }
        self.p += 1;
        self.pos += 1;
        if self.p == kn.seg.len() {
            self.close_segment(kn);
        }
        Ok(())
    }

    /// Append the rest of the current run of `i` at once (no-op when the
    /// next digit is free).
    pub fn finish_run(&mut self) -> Result<u64, CantorError> {
        let kn = self.kernel()?;
        if self.p < kn.seg.free {
            return Ok(0);
        }
        let n = kn.seg.len() - self.p;
        self.pos += n;
        self.close_segment(kn);
        Ok(n)
    }

    fn close_segment(&mut self, kn: &SegmentKernel) {
        self.base_ln += -2.0 * kn.s * self.ln_q + kn.ln_g(0, self.r) - kn.ln_z;
        self.k += 1;
        self.p = 0;
        self.ln_q = 0.0;
        self.r = 0.0;
    }
}

/// A cylinder with its mass.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureNode {
    /// The prefix.
    pub digits: Vec<u64>,
    /// `log μ(I_n(prefix))`.
    pub ln_mass: f64,
    /// Number of segment boundaries `m_k` crossed.
    pub boundaries: usize,
}

impl MeasureNode {
    /// `μ(I_n(prefix))`.
    pub fn mass(&self) -> f64 {
        libm::exp(self.ln_mass)
    }
}

/// Mass of the cylinder of `prefix`.
pub fn measure_mass(measure: &Measure, prefix: &[u64]) -> Result<MeasureNode, CantorError> {
    let c = measure.walk(prefix)?;
    Ok(MeasureNode {
        digits: prefix.to_vec(),
        ln_mass: c.ln_mass(),
        boundaries: c.boundaries(),
    })
}

/// `log μ(I_n) / log |I_n|` with the exact cylinder length.
pub fn local_dimension(measure: &Measure, prefix: &[u64]) -> Result<f64, CantorError> {
    if prefix.is_empty() {
        return Err(CantorError::OutOfRange("local dimension needs a non-empty prefix".into()));
    }
    let c = measure.walk(prefix)?;
    let (qn, qn1) = continuant_pair(prefix);
    let ln_len = ln_ratio(&interval_length(&qn, &qn1));
    Ok(c.ln_mass() / ln_len)
}

/// Floating-point `log |I_n|` (for long prefixes where the exact value is
/// too costly).
pub fn ln_interval_length_f64(prefix: &[u64]) -> f64 {
    let (lq, r) = log_continuant(prefix);
    -(2.0 * lq + libm::log1p(r))
}
