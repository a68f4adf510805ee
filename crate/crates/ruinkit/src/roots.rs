//! Bracketed bisection.
//!
//! Everything in this crate that inverts a monotone function (spectral
//! quantiles, decay-rate roots, inverse-transform sampling, tail crossings)
//! goes through bisection: the functions involved can be extremely flat or
//! steep near poles, and bisection is the only method that cannot leave a
//! verified bracket.

use crate::error::{Error, Result};

pub const MAX_BISECT_ITER: usize = 200;

/// Find a root of `f` inside `[lo, hi]`, assuming `f(lo)` and `f(hi)` have
/// opposite signs. Runs until the bracket width drops below
/// `rel_tol * |mid|` or the bracket can no longer be split in floating
/// point, whichever comes first. `rel_tol = 0` therefore bisects to the last
/// representable bit.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::numeric(format!(
            "bisection bracket [{lo:.6e}, {hi:.6e}] is empty"
        )));
    }
    let mut lo = lo;
    let mut hi = hi;
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() * f_hi.signum() > 0.0 {
        return Err(Error::numeric(format!(
            "no sign change on [{lo:.6e}, {hi:.6e}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}"
        )));
    }
    let neg_low = f_lo < 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..1100 {
        if mid <= lo || mid >= hi {
            return Ok(mid.clamp(lo, hi));
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == neg_low {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs() {
            return Ok(mid);
        }
    }
    Ok(mid)
}

/// Variant of [`bisect`] with an iteration cap instead of running to full
/// floating-point resolution; used by inverse-transform sampling where
/// 200 iterations already exceed the requested 1e-10 relative accuracy.
pub fn bisect_capped<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> f64 {
    let neg_low = f(lo) < 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        if mid <= lo || mid >= hi || hi - lo <= rel_tol * mid.abs() {
            break;
        }
        if (f(mid) < 0.0) == neg_low {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
    }
    mid
}

/// Double `hi` upward from `start` until `f` changes sign against `f(lo)`,
/// erroring out if the bracket would exceed `cap`.
pub fn expand_bracket_up<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    start: f64,
    cap: f64,
) -> Result<(f64, f64)> {
    let target = f(lo) < 0.0;
    let mut hi = start.max(lo * 2.0).max(f64::MIN_POSITIVE);
    while hi <= cap {
        if (f(hi) < 0.0) != target {
            return Ok((lo, hi));
        }
        hi *= 2.0;
    }
    Err(Error::numeric(format!(
        "bracket expansion from {start:.6e} exceeded {cap:.6e} without a sign change"
    )))
}
