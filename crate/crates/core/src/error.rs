use crate::domain::GroundStateResult;

/// Errors produced by the solvers and estimators in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The requested (d, σ, β) combination has no ground state.
    #[error("no ground state exists: {0}")]
    ExistenceViolation(String),

    /// An estimate was requested outside the regime where it is defined.
    #[error("outside regime: {0}")]
    Regime(String),

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    /// A root bracket could not be established. The trace holds the
    /// `(argument, value)` pairs that were scanned.
    #[error("bracket failure: {message}")]
    Bracket {
        message: String,
        trace: Vec<(f64, f64)>,
    },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// The gradient flow hit its iteration limit. The last iterate and its
    /// diagnostics are preserved.
    #[error("not converged after {} iterations (update rate {:.3e})", .result.iterations, .update_rate)]
    NotConverged {
        result: Box<GroundStateResult>,
        update_rate: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
