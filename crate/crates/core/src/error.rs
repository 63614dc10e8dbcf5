use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The basis of a function space is linearly dependent.
    #[error("dependent basis: {0}")]
    DependentBasis(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A proven identity failed to hold; indicates an implementation bug.
    #[error("identity violation: {0}")]
    IdentityViolation(String),

    #[error("rank deficiency: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    /// Eigenvalue clusters could not be separated; re-randomize coefficients or inputs.
    #[error("genericity failure: {0}")]
    Genericity(String),

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
