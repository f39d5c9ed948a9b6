//! Shared numeric helpers: bisection, adaptive quadrature, and order-fixed
//! pairwise summation for reproducible parallel reductions.

use crate::{Error, Result};

/// Bisection root of `f` on `[lo, hi]` to absolute tolerance `tol`.
///
/// Requires a sign change across the bracket; `context` names the equation
/// in the error when there is none.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, context: &str) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket(format!(
            "{context}: f({lo}) = {flo:.6e} and f({hi}) = {fhi:.6e} have the same sign"
        )));
    }
    let (mut lo, mut hi, lo_sign) = (lo, hi, flo.signum());
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval no longer representable
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Combine per-chunk partial results in a fixed pairwise tree.
///
/// The result depends only on the order of `parts`, never on how many
/// workers produced them, which is what makes the Monte Carlo reductions
/// bit-reproducible across thread counts.
pub fn pairwise_reduce<T: Clone>(mut parts: Vec<T>, merge: impl Fn(&T, &T) -> T) -> Option<T> {
    if parts.is_empty() {
        return None;
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        for pair in parts.chunks(2) {
            next.push(if pair.len() == 2 {
                merge(&pair[0], &pair[1])
            } else {
                pair[0].clone()
            });
        }
        parts = next;
    }
    parts.pop()
}
