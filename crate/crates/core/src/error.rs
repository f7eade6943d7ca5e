use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not hermitian (asymmetry {asymmetry:.3e} exceeds {limit:.1e})")]
    NotHermitian { asymmetry: f64, limit: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The solver stopped without meeting its tolerance. Carries the best
    /// bounds it found so callers can still report something.
    #[error("solver did not converge ({reason}); best bounds [{lower:.9}, {upper:.9}]")]
    SolverFailure {
        reason: String,
        lower: f64,
        upper: f64,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
