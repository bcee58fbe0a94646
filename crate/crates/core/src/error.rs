use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index out of range: {0}")]
    Index(String),

    #[error("cannot build a tensor product of an empty chain")]
    EmptyChain,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("steady state is not unique: {count} eigenvalues with |lambda| < {tol:e}")]
    NonUniqueSteadyState { count: usize, tol: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
