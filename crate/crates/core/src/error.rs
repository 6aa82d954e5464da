use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants carry enough context (edge, corner, face) to point at the
/// offending piece of input without re-running the computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A law inversion has no preimage in the admissible interval.
    #[error("domain error at {location}: {message}")]
    Domain { location: String, message: String },

    /// Gram determinant or half-angle expression vanishes.
    #[error("degenerate triangle: {0}")]
    Degenerate(String),

    /// SAS data admits no generalized triangle.
    #[error("not realizable at {location}: {message}")]
    Realizability { location: String, message: String },

    /// Argument outside the documented interval or malformed.
    #[error("invalid input: {0}")]
    Input(String),

    /// Case excluded from the solvers (no rigidity available).
    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// Enumeration exceeded its configured cap.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// Prescribed data lies outside the image; `witness` describes why.
    #[error("infeasible target: {message}")]
    Infeasible { message: String, witness: Option<String> },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e}, last step {last_step:.3e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        last_step: f64,
    },

    #[error("floating-point overflow: {0}")]
    Overflow(String),

    /// A flow step left the admissible domain; `time` is the last valid time.
    #[error("flow left the domain at t = {time}: {message}")]
    DomainExit { time: f64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Domain {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn realizability(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Realizability {
            location: location.into(),
            message: message.into(),
        }
    }
}
