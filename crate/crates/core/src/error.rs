//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An iterated state escaped the open unit interval.
    #[error("dynamics left (0,1) at step {step}: computed state {value}")]
    Dynamics { step: usize, value: f64 },

    /// A restricted system was numerically rank-deficient.
    #[error("numerical rank deficiency: {0}")]
    NumericalRank(String),

    /// A matrix that must be positive semidefinite has a significantly
    /// negative eigenvalue.
    #[error("matrix is not positive semidefinite: smallest eigenvalue {lambda_min}")]
    NotPositiveSemidefinite { lambda_min: f64 },

    /// Support enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {required} supports > budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    /// An end-to-end experiment could not be completed.
    #[error("experiment failed: {0}")]
    Experiment(String),

    /// Configuration file or config-level validation problem.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed serialized input (CSV/JSON payloads).
    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
