//! The digit-insertion map `x ↦ f(x)`.
//!
//! Block `k` consists of the source positions `n_k + 1 ..= n_{k+1}`. With
//! `L_k = m_k − n_k`, the digit `d` is inserted before the source positions
//! `n_k + 1 + j·L_k` for `j = 0, 1, …` while that position is at most
//! `n_{k+1}`, so every constant stretch of free digits in `f(x)` is cut
//! after at most `L_k` digits. Positions before `n_1 + 1` are unchanged.
//! The set `K` of inserted output positions has density tending to zero.

use alloc::vec::Vec;

use super::{CantorError, CantorSpec, DigitSink};

/// Iterator over `(source position, digit)` insertion points, in order.
#[derive(Clone, Debug)]
pub struct InsertSchedule<'a> {
    spec: &'a CantorSpec,
    k: usize,
    j: u64,
}

impl<'a> InsertSchedule<'a> {
    /// Schedule of `spec`.
    pub fn new(spec: &'a CantorSpec) -> Self {
        InsertSchedule { spec, k: 1, j: 0 }
    }
}

impl Iterator for InsertSchedule<'_> {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        let seq = &self.spec.seq;
        loop {
            if self.k > seq.len() {
                return None;
            }
            let nk = seq.n[self.k - 1];
            let step = seq.m[self.k - 1] - nk;
            // The last constructed block runs on without end.
            let span = seq.n.get(self.k).map_or(u64::MAX, |&nn| nn - nk);
            let off = self.j.checked_mul(step);
            match off {
                Some(off) if off < span => {
                    self.j += 1;
                    return Some((nk + 1 + off, self.spec.insertion_digit(self.k)));
                }
                _ => {
                    self.k += 1;
                    self.j = 0;
                }
            }
        }
    }
}

/// A [`DigitSink`] adapter applying the insertion map on the fly.
#[derive(Clone, Debug)]
pub struct InsertSink<'a, S> {
    schedule: InsertSchedule<'a>,
    next: Option<(u64, u64)>,
    src: u64,
    out: u64,
    inserted: u64,
    marked: Option<Vec<u64>>,
    inner: S,
}

impl<'a, S: DigitSink> InsertSink<'a, S> {
    /// Wrap `inner`; `record_marked` keeps the inserted output positions.
    pub fn new(spec: &'a CantorSpec, inner: S, record_marked: bool) -> Self {
        let mut schedule = InsertSchedule::new(spec);
        let next = schedule.next();
        InsertSink {
            schedule,
            next,
            src: 0,
            out: 0,
            inserted: 0,
            marked: record_marked.then(Vec::new),
            inner,
        }
    }

    /// Insert `d` if the next source digit is an insertion point.
    #[inline]
    fn maybe_insert(&mut self) {
        while let Some((p, d)) = self.next {
            if p != self.src + 1 {
                break;
            }
            self.out += 1;
            self.inserted += 1;
            if let Some(m) = self.marked.as_mut() {
                m.push(self.out);
            }
            self.inner.digit(d);
            self.next = self.schedule.next();
        }
    }

    /// Source digits consumed.
    pub fn source_len(&self) -> u64 {
        self.src
    }

    /// Output digits produced.
    pub fn output_len(&self) -> u64 {
        self.out
    }

    /// Number of inserted digits.
    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    /// Recover the inner sink and the marked positions (if recorded).
    pub fn into_parts(self) -> (S, Option<Vec<u64>>) {
        (self.inner, self.marked)
    }
}

impl<S: DigitSink> DigitSink for InsertSink<'_, S> {
    #[inline]
    fn digit(&mut self, a: u64) {
        self.maybe_insert();
        self.src += 1;
        self.out += 1;
        self.inner.digit(a);
    }

    fn run(&mut self, a: u64, mut count: u64) {
        while count > 0 {
            self.maybe_insert();
            // After `maybe_insert` the next point lies beyond `src + 1`.
            let chunk = match self.next {
                Some((p, _)) => count.min(p - self.src - 1),
                None => count,
            };
            self.inner.run(a, chunk);
            self.src += chunk;
            self.out += chunk;
            count -= chunk;
        }
    }
}

/// Result of [`insert_map`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertResult {
    /// Digits of `f(x)`.
    pub digits: Vec<u64>,
    /// 1-based output positions of the inserted digits (the set `K`).
    pub marked: Vec<u64>,
}

impl InsertResult {
    /// `#(K ∩ [1, n]) / n`.
    pub fn density(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let c = self.marked.partition_point(|&p| p <= n);
        c as f64 / n as f64
    }
}

/// Apply the insertion map to an admissible prefix.
pub fn insert_map(spec: &CantorSpec, digits: &[u64]) -> Result<InsertResult, CantorError> {
    spec.check_prefix(digits)?;
    let mut sink = InsertSink::new(spec, Vec::with_capacity(digits.len() + digits.len() / 2), true);
    for &a in digits {
        sink.digit(a);
    }
    let (digits, marked) = sink.into_parts();
    Ok(InsertResult {
        digits,
        marked: marked.unwrap_or_default(),
    })
}

/// Delete the digits at the (sorted, 1-based) positions `marked`.
pub fn delete_marked(digits: &[u64], marked: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(digits.len());
    let mut it = marked.iter().peekable();
    for (j, &a) in digits.iter().enumerate() {
        let p = j as u64 + 1;
        if it.peek() == Some(&&p) {
            it.next();
            continue;
        }
        out.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{construct_sequences, SeqPair};
    use num_rational::BigRational;

    fn spec() -> CantorSpec {
        let seq = construct_sequences(&BigRational::new(1.into(), 3.into()), &BigRational::from_integer(1.into()), 8).unwrap();
        CantorSpec::new(seq, 3, 1, 4).unwrap()
    }

    #[test]
    fn two_insertions_in_a_block_of_twice_the_run() {
        let seq = SeqPair {
            n: alloc::vec![2, 10],
            m: alloc::vec![6, 14],
            bounds: None,
            recipe: crate::cantor::Recipe::RunLength {
                alpha: BigRational::new(1.into(), 2.into()),
                beta: BigRational::new(1.into(), 2.into()),
            },
        };
        let sp = CantorSpec::new(seq, 2, 1, 3).unwrap();
        // Block 1 is positions 3..=10 (length 8 = 2·4): insert before 3 and 7.
        let pts: Vec<(u64, u64)> = InsertSchedule::new(&sp).take(2).collect();
        assert_eq!(pts, alloc::vec![(3, 3), (7, 3)]);
        let x = alloc::vec![2u64, 2, 1, 1, 1, 1, 2, 1, 2, 2];
        let f = insert_map(&sp, &x).unwrap();
        assert_eq!(f.digits, alloc::vec![2, 2, 3, 1, 1, 1, 1, 3, 2, 1, 2, 2]);
        assert_eq!(f.marked, alloc::vec![3, 8]);
    }

    #[test]
    fn round_trip_and_density() {
        let sp = spec();
        let depth = sp.seq.m[5];
        let x: Vec<u64> = (1..=depth)
            .map(|p| match sp.allowed_at(p).unwrap() {
                crate::cantor::Children::Fixed(i) => i,
                crate::cantor::Children::Range(b) => 1 + (p * 7919) % b,
            })
            .collect();
        let f = insert_map(&sp, &x).unwrap();
        assert_eq!(delete_marked(&f.digits, &f.marked), x);
        let l1 = (sp.seq.m[0] - sp.seq.n[0]) as f64;
        let n = f.digits.len() as u64;
        assert!(f.density(n) <= 2.0 / l1);
        for p in &f.marked {
            assert_eq!(f.digits[*p as usize - 1], 4);
        }
    }

    #[test]
    fn streaming_runs_match_digitwise() {
        let sp = spec();
        let depth = sp.seq.m[4];
        let x: Vec<u64> = (1..=depth)
            .map(|p| match sp.allowed_at(p).unwrap() {
                crate::cantor::Children::Fixed(i) => i,
                crate::cantor::Children::Range(_) => 1,
            })
            .collect();
        let f = insert_map(&sp, &x).unwrap();
        let mut sink = InsertSink::new(&sp, Vec::new(), true);
        sink.run(1, depth);
        let (d, m) = sink.into_parts();
        assert_eq!(d, f.digits);
        assert_eq!(m.unwrap(), f.marked);
    }
}
