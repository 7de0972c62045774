use core::fmt;

/// Errors produced by the spectral and regularization machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument left the operation's domain (nonpositive time, empty grid, ...).
    Domain(&'static str),
    /// The operation requires an invertible operator and got one with a kernel
    /// or a zero eigenvalue.
    Invertibility(&'static str),
    /// A configuration value is inconsistent with the requested computation.
    Config(&'static str),
    /// The secular solver could not certify a root; the unresolved bracket is reported.
    Solver {
        what: &'static str,
        lo: f64,
        hi: f64,
    },
    /// Least-squares fit of the small-time expansion is ill conditioned.
    IllConditionedFit { condition: f64 },
    /// Adaptive quadrature did not reach the requested tolerance.
    Quadrature { residual: f64 },
    /// Evaluation at a pole of the analytic continuation; carries the residue.
    Pole { location: f64, residue: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Invertibility(msg) => write!(f, "invertibility error: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Solver { what, lo, hi } => {
                write!(f, "solver error: {what} (unresolved interval [{lo}, {hi}])")
            }
            Error::IllConditionedFit { condition } => {
                write!(f, "ill-conditioned fit (condition number {condition:.3e})")
            }
            Error::Quadrature { residual } => {
                write!(f, "quadrature did not converge (residual {residual:.3e})")
            }
            Error::Pole { location, residue } => {
                write!(f, "pole at s = {location} (residue {residue})")
            }
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
