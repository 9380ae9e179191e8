//! Sampling digit prefixes from the measure `μ`.
//!
//! [`sample_measure`] draws each digit from its exact conditional law
//! `μ(I_{n+1}) / μ(I_n)`. [`StreamSampler`] produces very long points for
//! the construction round-trip: deep inside a long free stretch, the
//! conditional law only depends on the state `r = q_{j−1}/q_j` through the
//! stationary shape of `G`, and is tabulated on a fine `r` grid; the last
//! free digits before each run are drawn exactly.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::measure::{Measure, SegmentKernel};
use super::{CantorError, Children, DigitSink};
use crate::mc::{stream_rng, uniform01};

/// Largest free alphabet the samplers enumerate.
pub const MAX_SAMPLE_BOUND: u64 = 1 << 16;

/// Largest alphabet given a stationary table.
pub const MAX_TABLE_BOUND: u64 = 64;

/// Default number of grid intervals of a stationary table.
pub const DEFAULT_TABLE_GRID: usize = 1 << 12;

fn draw_exact<R: RngCore>(kn: &SegmentKernel, r: f64, rem: u64, rng: &mut R, buf: &mut Vec<f64>) -> Result<u64, CantorError> {
    let b = kn.seg.bound;
    if b > MAX_SAMPLE_BOUND {
        return Err(CantorError::OutOfRange("alphabet too large to sample".into()));
    }
    buf.clear();
    buf.extend((1..=b).map(|a| kn.ln_child_weight(a, r, rem)));
    let top = buf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for w in buf.iter_mut() {
        *w = libm::exp(*w - top);
        total += *w;
    }
    let mut u = uniform01(rng) * total;
    for (j, w) in buf.iter().enumerate() {
        if u < *w {
            return Ok(j as u64 + 1);
        }
        u -= w;
    }
    Ok(b)
}

/// Draw a prefix of length `depth` from `μ` with the stream for `(seed, 0)`.
pub fn sample_measure(measure: &Measure, depth: u64, seed: u64) -> Result<Vec<u64>, CantorError> {
    sample_measure_with(measure, depth, &mut stream_rng(seed, 0))
}

/// Draw a prefix of length `depth` from `μ` using `rng`.
pub fn sample_measure_with<R: RngCore>(measure: &Measure, depth: u64, rng: &mut R) -> Result<Vec<u64>, CantorError> {
    if depth > measure.max_depth() {
        return Err(CantorError::BeyondSequence(depth));
    }
    let mut c = measure.cursor();
    let mut out = Vec::with_capacity(depth as usize);
    let mut buf = Vec::new();
    while c.depth() < depth {
        let a = match c.children()? {
            Children::Fixed(i) => i,
            Children::Range(_) => {
                let kn = c.current_kernel()?;
                draw_exact(kn, c.state(), c.free_left()?, rng, &mut buf)?
            }
        };
        c.push(a)?;
        out.push(a);
    }
    Ok(out)
}

/// Conditional CDFs of the stationary regime on an `r` grid.
#[derive(Clone, Debug)]
pub struct StationaryTable {
    bound: usize,
    grid: usize,
    /// `cdf[g * bound + (a − 1)] = P(digit ≤ a | r = g/grid)`.
    cdf: Vec<f64>,
}

impl StationaryTable {
    /// Tabulate `P(a | r) ∝ (a + r)^{−2s} φ(1/(a + r))` for the stationary
    /// shape `φ` of `kernel`.
    pub fn new(kernel: &SegmentKernel, grid: usize) -> Self {
        let bound = kernel.seg.bound as usize;
        let (coll, shape) = kernel.stationary_shape();
        let mut cdf = vec![0.0; (grid + 1) * bound];
        for g in 0..=grid {
            let r = g as f64 / grid as f64;
            let row = &mut cdf[g * bound..(g + 1) * bound];
            let mut acc = 0.0;
            for (j, slot) in row.iter_mut().enumerate() {
                let base = (j + 1) as f64 + r;
                acc += libm::exp(-2.0 * kernel.s * libm::log(base)) * coll.eval(shape, 1.0 / base);
                *slot = acc;
            }
            for slot in row.iter_mut() {
                *slot /= acc;
            }
        }
        StationaryTable { bound, grid, cdf }
    }

    /// Draw a digit given state `r ∈ [0, 1]` and uniform `u ∈ [0, 1)`.
    #[inline]
    pub fn draw(&self, r: f64, u: f64) -> u64 {
        let x = r * self.grid as f64;
        let g = (x as usize).min(self.grid - 1);
        let f = x - g as f64;
        let lo = &self.cdf[g * self.bound..(g + 1) * self.bound];
        let hi = &self.cdf[(g + 1) * self.bound..(g + 2) * self.bound];
        // Branch-free count of the CDF values at or below `u`.
        let mut a = 1u64;
        for j in 0..self.bound - 1 {
            a += (u >= lo[j] + f * (hi[j] - lo[j])) as u64;
        }
        a
    }

    /// `P(digit ≤ a | r)` at a grid point.
    pub fn cdf_at(&self, g: usize, a: u64) -> f64 {
        self.cdf[g * self.bound + (a as usize - 1)]
    }
}

/// Fast sampler of whole segments for long points.
#[derive(Clone, Debug)]
pub struct StreamSampler<'a> {
    measure: &'a Measure,
    tables: Vec<Option<StationaryTable>>,
}

impl<'a> StreamSampler<'a> {
    /// Prepare tables (with `grid` intervals) for every segment whose free
    /// stretch outlasts the exactly collocated iterates.
    pub fn new(measure: &'a Measure, grid: usize) -> Self {
        let tables = (1..=measure.segments())
            .map(|k| {
                let kn = measure.kernel(k);
                let long = kn.seg.free > kn.exact_len() + 1;
                (long && kn.seg.bound >= 2 && kn.seg.bound <= MAX_TABLE_BOUND).then(|| StationaryTable::new(kn, grid))
            })
            .collect();
        StreamSampler { measure, tables }
    }

    /// Emit segments `1..=k_max` into `sink`; returns the number of digits.
    pub fn run<R: RngCore, S: DigitSink>(&self, rng: &mut R, k_max: usize, sink: &mut S) -> Result<u64, CantorError> {
        if k_max > self.measure.segments() {
            return Err(CantorError::BeyondSequence(self.measure.max_depth() + 1));
        }
        let i = self.measure.spec().i;
        let mut emitted = 0u64;
        let mut buf = Vec::new();
        for k in 1..=k_max {
            let kn = self.measure.kernel(k);
            let free = kn.seg.free;
            let mut r = 0.0f64;
            let mut j = 0u64;
            if let Some(table) = &self.tables[k - 1] {
                // Stationary while more than `exact_len` digits remain after
                // the one being drawn.
                let stationary = free - kn.exact_len() - 1;
                while j < stationary {
                    let a = table.draw(r, uniform01(rng));
                    r = 1.0 / (a as f64 + r);
                    sink.digit(a);
                    j += 1;
                }
            }
            while j < free {
                let a = if kn.seg.bound == 1 { 1 } else { draw_exact(kn, r, free - j, rng, &mut buf)? };
                r = 1.0 / (a as f64 + r);
                sink.digit(a);
                j += 1;
            }
            sink.run(i, kn.seg.tail);
            emitted += kn.seg.len();
        }
        Ok(emitted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{construct_sequences, CantorSpec};
    use num_rational::BigRational;

    fn measure(b: u64, k: usize) -> Measure {
        let seq = construct_sequences(&BigRational::new(1.into(), 3.into()), &BigRational::from_integer(1.into()), 12).unwrap();
        Measure::new(CantorSpec::new(seq, b, 1, b + 1).unwrap(), k).unwrap()
    }

    #[test]
    fn samples_are_admissible_and_deterministic() {
        let m = measure(3, 5);
        let depth = m.max_depth();
        for seed in 0..20 {
            let x = sample_measure(&m, depth, seed).unwrap();
            m.spec().check_prefix(&x).unwrap();
            assert_eq!(x, sample_measure(&m, depth, seed).unwrap());
        }
    }

    #[test]
    fn root_frequencies_match_masses() {
        let m = measure(3, 3);
        let c = m.cursor();
        let p: Vec<f64> = (1..=3).map(|a| libm::exp(c.child_ln_mass(a).unwrap())).collect();
        let n = 10_000u32;
        let mut counts = [0u32; 3];
        let mut rng = stream_rng(11, 0);
        for _ in 0..n {
            let x = sample_measure_with(&m, 1, &mut rng).unwrap();
            counts[x[0] as usize - 1] += 1;
        }
        for a in 0..3 {
            let sd = libm::sqrt(p[a] * (1.0 - p[a]) * n as f64);
            assert!((counts[a] as f64 - p[a] * n as f64).abs() < 3.0 * sd);
        }
    }

    #[test]
    fn table_matches_exact_conditional_at_nodes() {
        let m = measure(3, 12);
        let k = (1..=m.segments()).find(|&k| m.kernel(k).seg.free > 200).unwrap();
        let kn = m.kernel(k);
        let t = StationaryTable::new(kn, 1024);
        for g in [0usize, 100, 512, 1024] {
            let r = g as f64 / 1024.0;
            let w: Vec<f64> = (1..=3).map(|a| libm::exp(kn.ln_child_weight(a, r, kn.seg.free))).collect();
            let tot: f64 = w.iter().sum();
            assert!((t.cdf_at(g, 1) - w[0] / tot).abs() < 1e-9);
            assert!((t.cdf_at(g, 2) - (w[0] + w[1]) / tot).abs() < 1e-9);
        }
    }

    #[test]
    fn stream_sampler_output_is_admissible() {
        let m = measure(3, 6);
        let s = StreamSampler::new(&m, 1024);
        let mut out = Vec::new();
        let n = s.run(&mut stream_rng(3, 0), 6, &mut out).unwrap();
        assert_eq!(n, m.max_depth());
        m.spec().check_prefix(&out).unwrap();
    }
}
