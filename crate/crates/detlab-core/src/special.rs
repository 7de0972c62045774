//! Special functions: error functions, log-gamma, and the Hurwitz zeta
//! continuation used by the closed-form spectral zeta functions.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Bernoulli numbers B_2, B_4, ..., B_24 for Euler-Maclaurin corrections.
pub const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

// Rational minimax coefficients from Cody's SPECFUN `calerf`
// (W. J. Cody, Math. Comp. 23 (1969) 631-638). Relative error below
// 1e-15 in each regime on IEEE doubles.
const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERF_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERF_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERF_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERF_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];

const INV_SQRT_PI: f64 = 5.641_895_835_477_563e-1;

/// erf on |x| <= 0.46875.
fn erf_small(x: f64) -> f64 {
    let ysq = if x.abs() > 1.11e-16 { x * x } else { 0.0 };
    let mut num = ERF_A[4] * ysq;
    let mut den = ysq;
    for i in 0..3 {
        num = (num + ERF_A[i]) * ysq;
        den = (den + ERF_B[i]) * ysq;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

/// exp(x^2) erfc(x) on x >= 0.46875.
fn erfcx_large(x: f64) -> f64 {
    if x <= 4.0 {
        let mut num = ERF_C[8] * x;
        let mut den = x;
        for i in 0..7 {
            num = (num + ERF_C[i]) * x;
            den = (den + ERF_D[i]) * x;
        }
        (num + ERF_C[7]) / (den + ERF_D[7])
    } else {
        let ysq = 1.0 / (x * x);
        let mut num = ERF_P[5] * ysq;
        let mut den = ysq;
        for i in 0..4 {
            num = (num + ERF_P[i]) * ysq;
            den = (den + ERF_Q[i]) * ysq;
        }
        let r = ysq * (num + ERF_P[4]) / (den + ERF_Q[4]);
        (INV_SQRT_PI - r) / x
    }
}

/// exp(-x^2) evaluated Cody-style to keep erfc accurate near the underflow edge.
fn exp_msq(x: f64) -> f64 {
    let ysq = libm::trunc(x * 16.0) / 16.0;
    let del = (x - ysq) * (x + ysq);
    libm::exp(-ysq * ysq) * libm::exp(-del)
}

pub fn erf(x: f64) -> f64 {
    if x.abs() <= 0.46875 {
        erf_small(x)
    } else {
        let v = 1.0 - exp_msq(x.abs()) * erfcx_large(x.abs());
        if x < 0.0 {
            -v
        } else {
            v
        }
    }
}

/// Complementary error function, absolute error below 1e-14 everywhere.
pub fn erfc(x: f64) -> f64 {
    if x.abs() <= 0.46875 {
        1.0 - erf_small(x)
    } else if x > 26.6 {
        0.0
    } else if x >= 0.0 {
        exp_msq(x) * erfcx_large(x)
    } else {
        2.0 - erfc(-x)
    }
}

/// Scaled complement exp(x^2) erfc(x); stays finite for large positive x.
pub fn erfcx(x: f64) -> f64 {
    if x >= 0.46875 {
        erfcx_large(x)
    } else if x >= -26.0 {
        libm::exp(x * x) * erfc(x)
    } else {
        f64::INFINITY
    }
}

/// Natural log of |Gamma(x)| for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Hurwitz zeta zetaH(s, q) for q > 0 by Euler-Maclaurin continuation.
///
/// Valid on the whole complex plane except the simple pole at s = 1;
/// evaluation there returns [`Error::Pole`] with residue 1.
pub fn hurwitz_zeta(s: Complex64, q: f64) -> Result<Complex64> {
    if !(q > 0.0) {
        return Err(Error::Domain("hurwitz_zeta requires q > 0"));
    }
    if (s - Complex64::new(1.0, 0.0)).norm() < 1e-10 {
        return Err(Error::Pole {
            location: 1.0,
            residue: 1.0,
        });
    }
    // shift until q + K is comfortably large for the asymptotic part
    let k_shift = (18.0 + s.norm() - q).max(0.0) as usize + 1;
    let mut head = Complex64::new(0.0, 0.0);
    for k in 0..k_shift {
        head += cpow(q + k as f64, -s);
    }
    let w = q + k_shift as f64;
    let mut tail = cpow(w, 1.0 - s) / (s - 1.0) + 0.5 * cpow(w, -s);
    // sum over j >= 1 of B_2j / (2j)! * (s)_{2j-1} * w^{-s-2j+1},
    // with (s)_m the rising factorial of m factors
    let mut poch = s; // (s)_1
    let mut fact = 2.0; // 2!
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = i + 1;
        let term = (b / fact) * poch * cpow(w, -s - (2 * j - 1) as f64);
        tail += term;
        if term.norm() < 1e-18 * (head.norm() + tail.norm() + 1.0) {
            break;
        }
        let m = (2 * j - 1) as f64; // factors used so far
        poch *= (s + m) * (s + m + 1.0);
        fact *= (m + 2.0) * (m + 3.0); // (2j)! -> (2j+2)!
    }
    Ok(head + tail)
}

/// zetaH'(0, q) = ln Gamma(q) - ln(2 pi)/2 (Lerch's formula).
pub fn hurwitz_zeta_deriv0(q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain("hurwitz_zeta_deriv0 requires q > 0"));
    }
    Ok(ln_gamma(q) - 0.5 * libm::log(2.0 * core::f64::consts::PI))
}

fn cpow(base: f64, e: Complex64) -> Complex64 {
    // base > 0 always here
    (e * libm::log(base)).exp()
}
