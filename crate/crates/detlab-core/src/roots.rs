//! Bracketed root isolation and certified bisection for secular functions.

use crate::error::{Error, Result};
use alloc::vec::Vec;

/// A root together with the final sign-change bracket that certifies it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedRoot {
    pub value: f64,
    pub bracket: (f64, f64),
}

impl CertifiedRoot {
    /// Width of the certifying interval.
    pub fn width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// Bisection on a sign-change bracket. The returned bracket width is at most
/// `rel_tol * (1 + |root|)`.
pub fn bisect(
    f: &mut impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
) -> Result<CertifiedRoot> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(CertifiedRoot {
            value: lo,
            bracket: (lo, lo),
        });
    }
    if fhi == 0.0 {
        return Ok(CertifiedRoot {
            value: hi,
            bracket: (hi, hi),
        });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Solver {
            what: "no sign change on bracket",
            lo,
            hi,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(CertifiedRoot {
                value: mid,
                bracket: (lo, hi),
            });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * (1.0 + 0.5 * (lo.abs() + hi.abs())) {
            break;
        }
    }
    Ok(CertifiedRoot {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
    })
}

/// Scans `[lo, hi]` in steps of `step` and bisects every sign change.
///
/// Roots of even multiplicity (no sign change) are invisible to the scan;
/// the secular functions used here have simple roots.
pub fn scan_roots(
    f: &mut impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    step: f64,
    rel_tol: f64,
) -> Result<Vec<CertifiedRoot>> {
    if !(step > 0.0) {
        return Err(Error::Domain("scan step must be positive"));
    }
    let mut roots = Vec::new();
    let n = libm::ceil((hi - lo) / step) as usize;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { hi } else { lo + step * i as f64 };
        let f1 = f(x1);
        if f0 == 0.0 {
            roots.push(CertifiedRoot {
                value: x0,
                bracket: (x0, x0),
            });
        } else if f0.signum() != f1.signum() {
            roots.push(bisect(f, x0, x1, rel_tol)?);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}
