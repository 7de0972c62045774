//! The tangential operator `B` as a pure spectral datum.
//!
//! `B` enters every formula only through its symmetric spectrum `{±μ_k}` and
//! the `G`-pairing of eigenmodes, so no cross-section manifold is ever
//! discretized. Closed-form spectral functions of `B²` (heat trace, zeta,
//! regularized determinant) live here.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::special;
use crate::sum;
use alloc::vec::Vec;
use num_complex::Complex64;

/// How the positive half-spectrum is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumGenerator {
    /// μ_k = a + k·d for k ≥ 0, unit multiplicity per mode.
    Arithmetic { a: f64, d: f64 },
    /// A finite, explicitly listed positive half-spectrum. The declared
    /// power-law tail exponent is truncation bookkeeping for callers that
    /// model an infinite spectrum by its head.
    Explicit { tail_exponent: f64 },
}

/// Symmetric spectral datum for the tangential operator.
///
/// Only the positive half `{μ_k}` is stored; the full spectrum is
/// `{+μ_k} ∪ {−μ_k}` with equal multiplicities. `copies` doubles the whole
/// datum, which is how the two-cut boundary `Y₀ ⊔ Y₀` is encoded.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialSpectrum {
    explicit_modes: Vec<(f64, u32)>,
    generator: SpectrumGenerator,
    kernel_dimension: u32,
    copies: u32,
}

impl TangentialSpectrum {
    pub fn arithmetic(a: f64, d: f64) -> Result<Self> {
        if !(a > 0.0 && d > 0.0) {
            return Err(Error::Domain("arithmetic spectrum requires a > 0, d > 0"));
        }
        Ok(Self {
            explicit_modes: Vec::new(),
            generator: SpectrumGenerator::Arithmetic { a, d },
            kernel_dimension: 0,
            copies: 1,
        })
    }

    pub fn explicit(modes: Vec<(f64, u32)>, tail_exponent: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::Domain("explicit spectrum must be nonempty"));
        }
        let mut prev = 0.0;
        for &(mu, mult) in &modes {
            if !(mu > 0.0) || mu < prev {
                return Err(Error::Domain(
                    "explicit eigenvalues must be positive and nondecreasing",
                ));
            }
            if mult == 0 {
                return Err(Error::Domain("multiplicities must be at least 1"));
            }
            prev = mu;
        }
        Ok(Self {
            explicit_modes: modes,
            generator: SpectrumGenerator::Explicit { tail_exponent },
            kernel_dimension: 0,
            copies: 1,
        })
    }

    /// Sets the kernel dimension field. Determinant operations reject
    /// anything nonzero; the field exists so non-invertible data can at
    /// least be represented.
    pub fn with_kernel_dimension(mut self, dim: u32) -> Self {
        self.kernel_dimension = dim;
        self
    }

    /// The same spectrum on a doubled cross-section (every multiplicity ×2).
    pub fn doubled(&self) -> Self {
        let mut s = self.clone();
        s.copies *= 2;
        s
    }

    pub fn kernel_dimension(&self) -> u32 {
        self.kernel_dimension
    }

    pub fn copies(&self) -> u32 {
        self.copies
    }

    pub fn is_invertible(&self) -> bool {
        self.kernel_dimension == 0
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(self.generator, SpectrumGenerator::Arithmetic { .. })
    }

    /// k-th positive eigenvalue with its multiplicity (copies included),
    /// or `None` past the end of an explicit spectrum.
    pub fn mode(&self, k: usize) -> Option<(f64, f64)> {
        match self.generator {
            SpectrumGenerator::Arithmetic { a, d } => {
                Some((a + k as f64 * d, self.copies as f64))
            }
            SpectrumGenerator::Explicit { .. } => self
                .explicit_modes
                .get(k)
                .map(|&(mu, m)| (mu, (m * self.copies) as f64)),
        }
    }

    /// Number of stored modes for explicit spectra, `usize::MAX` otherwise.
    pub fn mode_count(&self) -> usize {
        match self.generator {
            SpectrumGenerator::Arithmetic { .. } => usize::MAX,
            SpectrumGenerator::Explicit { .. } => self.explicit_modes.len(),
        }
    }

    pub fn min_mu(&self) -> f64 {
        self.mode(0).map(|(mu, _)| mu).unwrap_or(f64::INFINITY)
    }

    fn check_positive_time(t: f64) -> Result<()> {
        if !(t > 0.0) {
            return Err(Error::Domain("heat trace requires t > 0"));
        }
        Ok(())
    }

    /// Σ over the positive half-spectrum of mult·e^(−tμ²), with the
    /// Euler-Maclaurin tail beyond `cutoff` for arithmetic generators.
    pub fn half_heat_trace(&self, t: f64, cutoff: usize) -> Result<f64> {
        Self::check_positive_time(t)?;
        if cutoff == 0 {
            return Err(Error::Domain("cutoff must be at least 1"));
        }
        let n = cutoff.min(self.mode_count());
        let head = sum::pairwise_fn(n, |k| {
            let (mu, m) = self.mode(k).unwrap();
            m * libm::exp(-t * mu * mu)
        });
        let tail = match self.generator {
            SpectrumGenerator::Explicit { .. } => 0.0,
            SpectrumGenerator::Arithmetic { a, d } => {
                let mu_k = a + n as f64 * d;
                self.copies as f64 * gaussian_em_tail(mu_k, d, t)
            }
        };
        Ok(head + tail)
    }

    /// Tr e^(−tB²) over the full symmetric spectrum, truncated at `cutoff`
    /// positive modes plus the analytic tail.
    pub fn heat_trace_b2(&self, t: f64, cutoff: usize) -> Result<f64> {
        Ok(2.0 * self.half_heat_trace(t, cutoff)?)
    }

    /// ζ_{B²}(s) = Σ over the full spectrum of |μ|^(−2s), continued in s.
    ///
    /// Arithmetic generators use the Hurwitz zeta closed form
    /// 2·d^(−2s)·ζ_H(2s, a/d); explicit spectra are finite sums valid for
    /// every s.
    pub fn zeta_b2(&self, s: Complex64) -> Result<Complex64> {
        if !self.is_invertible() {
            return Err(Error::Invertibility("zeta_b2 requires an invertible B"));
        }
        let c = self.copies as f64;
        match self.generator {
            SpectrumGenerator::Arithmetic { a, d } => {
                let q = a / d;
                let zh = special::hurwitz_zeta(2.0 * s, q).map_err(|e| match e {
                    Error::Pole { .. } => Error::Pole {
                        location: 0.5,
                        residue: c / d,
                    },
                    other => other,
                })?;
                let scale = (-2.0 * s * libm::log(d)).exp();
                Ok(2.0 * c * scale * zh)
            }
            SpectrumGenerator::Explicit { .. } => {
                let total: Complex64 = self
                    .explicit_modes
                    .iter()
                    .map(|&(mu, m)| m as f64 * (-2.0 * s * libm::log(mu)).exp())
                    .sum();
                Ok(2.0 * c * total)
            }
        }
    }

    /// ζ'_{B²}(0) from the closed-form continuation.
    pub fn zeta_b2_deriv0(&self) -> Result<f64> {
        if !self.is_invertible() {
            return Err(Error::Invertibility(
                "determinant requires an invertible B",
            ));
        }
        let c = self.copies as f64;
        match self.generator {
            SpectrumGenerator::Arithmetic { a, d } => {
                let q = a / d;
                let zh0 = 0.5 - q; // zetaH(0, q)
                let zh0p = special::hurwitz_zeta_deriv0(q)?;
                Ok(2.0 * c * (-2.0 * libm::log(d) * zh0 + 2.0 * zh0p))
            }
            SpectrumGenerator::Explicit { .. } => {
                let lnsum = sum::pairwise_fn(self.explicit_modes.len(), |k| {
                    let (mu, m) = self.explicit_modes[k];
                    m as f64 * libm::log(mu)
                });
                Ok(-4.0 * c * lnsum)
            }
        }
    }

    /// det_ζ B² = exp(−ζ'_{B²}(0)); the plain product ∏μ_k⁴ for finite
    /// spectra (both spectral signs contribute).
    pub fn det_zeta_b2(&self) -> Result<f64> {
        Ok(libm::exp(-self.zeta_b2_deriv0()?))
    }
}

/// Euler-Maclaurin tail Σ_{k≥0} e^(−t(μ₀+kd)²) for the residual arithmetic
/// modes starting at μ₀.
fn gaussian_em_tail(mu0: f64, d: f64, t: f64) -> f64 {
    let x = mu0 * libm::sqrt(t);
    if x * x > 700.0 {
        return 0.0;
    }
    let e = libm::exp(-x * x);
    let s = libm::sqrt(t);
    let integral = special::SQRT_PI / (2.0 * d * s) * special::erfc(x);
    // odd derivatives in k of exp(-t(mu0+kd)^2) at k=0 via Hermite polynomials
    let h1 = -2.0 * x;
    let h3 = -8.0 * x * x * x + 12.0 * x;
    let h5 = -32.0 * libm::pow(x, 5.0) + 160.0 * x * x * x - 120.0 * x;
    let f1 = -(d * s) * h1 * e;
    let f3 = -libm::pow(d * s, 3.0) * h3 * e;
    let f5 = -libm::pow(d * s, 5.0) * h5 * e;
    integral + 0.5 * e - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0
}

/// One `(+μ, −μ)` eigenmode pair of `B` with its `G`-pairing, in the basis
/// `(φ, Gφ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair {
    pub mu: f64,
}

impl ModePair {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::Domain("mode pair requires μ > 0"));
        }
        Ok(Self { mu })
    }

    /// B restricted to the mode pair: diag(μ, −μ).
    pub fn b_matrix(&self) -> Mat2 {
        Mat2::diag(self.mu, -self.mu)
    }

    /// G restricted to the mode pair: G·φ = Gφ, G·Gφ = −φ.
    pub fn g_matrix(&self) -> Mat2 {
        Mat2([[0.0, -1.0], [1.0, 0.0]])
    }
}
