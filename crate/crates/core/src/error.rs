use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Energy below the critical energy: the exact refractive index is imaginary.
    #[error("total reflection regime: radicand 1 - (2 pi hbar^2 / m E) b n_o = {radicand:e} is negative")]
    TotalReflection { radicand: f64 },

    /// A tabulated structure function was queried outside its table.
    #[error("extrapolation: q = {q:e} 1/m outside tabulated range [{min:e}, {max:e}]")]
    Extrapolation { q: f64, min: f64, max: f64 },

    /// A structure model produced a value outside its physical range.
    #[error("structure model invalid: {0}")]
    ModelValidity(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(
        "quadrature did not converge on [{lower:e}, {upper:e}]: estimated error {error_estimate:e} \
         after {evaluations} evaluations"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// A NaN or infinity appeared in a computation.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Time step violates the integrator stability guard.
    #[error("step size error: dt * max(2 gamma / hbar) = {product:e} must be < {limit}")]
    StepSize { product: f64, limit: f64 },

    /// Phase-space or direction grid is unusable.
    #[error("grid error: {0}")]
    Grid(String),

    /// Small-angle expansion used outside its range of validity.
    #[error("small-angle validity: {0}")]
    SmallAngle(String),

    /// Malformed or inconsistent configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of a computation as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. } | Error::Numeric(_) | Error::ModelValidity(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
