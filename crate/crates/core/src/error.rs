use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid input parameter (step size, weight, count, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Arguments outside the domain on which an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A field or profile produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// An iterative method failed to reach its tolerance.
    #[error("no convergence in {what} after {evaluations} evaluations (error estimate {estimate:e})")]
    NonConvergence {
        what: String,
        evaluations: usize,
        estimate: f64,
    },

    /// Malformed textual input (polynomials, grids, subsets).
    #[error("parse error: {0}")]
    Parse(String),

    /// A pair of functions submitted as Poisson-commuting does not commute.
    #[error("functions do not Poisson-commute: |{{F,G}}| reaches {magnitude:e}")]
    NonCommuting { magnitude: f64 },

    /// The hypothesis of a cited statement is not satisfied.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Numeric,
    Hypothesis,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parameter(_)
            | Error::Domain(_)
            | Error::Parse(_)
            | Error::NonCommuting { .. } => ErrorKind::Input,
            Error::Evaluation(_) | Error::NonConvergence { .. } => ErrorKind::Numeric,
            Error::Hypothesis(_) => ErrorKind::Hypothesis,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
