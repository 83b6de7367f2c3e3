use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible domain.
    Domain(String),
    /// Adaptive quadrature exhausted its refinement budget. Carries the last
    /// estimate and its error bound so callers can decide whether it is usable.
    QuadratureNonConvergence {
        estimate: f64,
        error_bound: f64,
        tol: f64,
    },
    /// `bracket_root` was called on an interval without a sign change.
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },
    /// A right-hand side was not orthogonal to the declared kernel direction.
    KernelOrthogonality { inner: f64, tol: f64 },
    /// An eigenvalue/eigenvector computation failed to converge.
    EigenNonConvergence(String),
    /// A computed spectral quantity contradicts what the construction
    /// guarantees; signals numerical breakdown rather than a property of
    /// the wave.
    SpectralInconsistency(String),
    /// An iteration hit its step budget before meeting its tolerance.
    MaxIterations { iterations: usize, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::QuadratureNonConvergence {
                estimate,
                error_bound,
                tol,
            } => write!(
                f,
                "quadrature did not converge: estimate {estimate:e} with error bound {error_bound:e} (requested {tol:e})"
            ),
            Error::NoSignChange { lo, hi, g_lo, g_hi } => write!(
                f,
                "no sign change on [{lo}, {hi}]: g(lo) = {g_lo:e}, g(hi) = {g_hi:e}"
            ),
            Error::KernelOrthogonality { inner, tol } => write!(
                f,
                "right-hand side not orthogonal to kernel: <rhs, ker> = {inner:e} exceeds {tol:e}"
            ),
            Error::EigenNonConvergence(msg) => write!(f, "eigensolver did not converge: {msg}"),
            Error::SpectralInconsistency(msg) => write!(f, "spectral inconsistency: {msg}"),
            Error::MaxIterations { iterations, detail } => {
                write!(f, "iteration budget of {iterations} exhausted: {detail}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
