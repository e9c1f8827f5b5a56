//! One-dimensional bracketed search primitives.

use libm::{ceil, log};

/// `1/φ`, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section iterations needed to shrink `width` below `tol`.
pub fn golden_iterations(width: f64, tol: f64) -> usize {
    if width <= tol {
        return 0;
    }
    ceil(log(tol / width) / log(INV_PHI)) as usize
}

/// Maximizes `f` on `[lo, hi]` with a fixed number of golden-section steps.
///
/// Returns the best point evaluated and its value. Assumes unimodality; on
/// a flat function the lower probe wins ties.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of a function that is positive at `lo` and negative at `hi`, by
/// bisection until the bracket stops shrinking or `max_iter` is reached.
pub fn bisect_sign_change<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    max_iter: usize,
) -> f64 {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
