use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element is not invertible")]
    NonInvertible,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("duplicate modulus {0} in residue system")]
    DuplicateModulus(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("resource budget exhausted after {pairs} pairs and {reductions} reductions")]
    BudgetExhausted { pairs: usize, reductions: usize },
    #[error("basis is not in shape position: {0}")]
    ShapeFailure(String),
    #[error("candidate rejected: {0}")]
    CandidateRejected(String),
    #[error("attack failed: {0}")]
    AttackFailed(String),
    #[error("malformed document: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
