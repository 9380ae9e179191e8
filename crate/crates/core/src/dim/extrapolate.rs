//! Sequence extrapolation: Aitken's Δ² and Richardson (polynomial
//! extrapolation to `h = 0` by Neville's scheme).

use alloc::vec::Vec;

/// Aitken's Δ² on three consecutive terms; `None` when the second difference
/// vanishes (the sequence is already linear or constant).
pub fn aitken(x0: f64, x1: f64, x2: f64) -> Option<f64> {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let dd = d2 - d1;
    if dd == 0.0 || !dd.is_finite() {
        return None;
    }
    let v = x2 - d2 * d2 / dd;
    v.is_finite().then_some(v)
}

/// Value at `h = 0` of the interpolating polynomial through `(h_k, y_k)`.
///
/// # Panics
/// Panics if the slices differ in length or are empty.
pub fn neville_at_zero(h: &[f64], y: &[f64]) -> f64 {
    assert_eq!(h.len(), y.len());
    assert!(!h.is_empty());
    let mut p: Vec<f64> = y.to_vec();
    let n = h.len();
    for level in 1..n {
        for k in 0..n - level {
            let (ha, hb) = (h[k], h[k + level]);
            p[k] = (hb * p[k] - ha * p[k + 1]) / (hb - ha);
        }
    }
    p[0]
}

/// Richardson extrapolation of `y_k ≈ y(1/n_k)` assuming an expansion in
/// powers of `1/n`: returns `(full order, one order lower)` where the lower
/// order drops the smallest `n`.
pub fn richardson(ns: &[usize], y: &[f64]) -> (f64, f64) {
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let full = neville_at_zero(&h, y);
    let lower = if h.len() > 1 {
        neville_at_zero(&h[1..], &y[1..])
    } else {
        full
    };
    (full, lower)
}
