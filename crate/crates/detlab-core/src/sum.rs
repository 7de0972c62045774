//! Deterministic floating-point reductions.
//!
//! Every sum over a stored collection goes through [`pairwise`], a fixed-shape
//! pairwise tree with Neumaier compensation at the leaves. The reduction shape
//! depends only on the slice length, so results are bit-identical no matter how
//! the caller scheduled the work that produced the slice.

use alloc::vec::Vec;

const LEAF: usize = 32;

/// Compensated sequential sum (Neumaier variant of Kahan summation).
pub fn neumaier(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Fixed-shape pairwise tree sum with compensated leaves.
pub fn pairwise(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return neumaier(xs);
    }
    let mid = xs.len() / 2;
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// Sums `f(i)` for `i in 0..n` through the fixed reduction shape.
pub fn pairwise_fn(n: usize, mut f: impl FnMut(usize) -> f64) -> f64 {
    let buf: Vec<f64> = (0..n).map(|i| f(i)).collect();
    pairwise(&buf)
}

/// Streaming compensated accumulator for loops with data-dependent length.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
