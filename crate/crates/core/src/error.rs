use thiserror::Error;

/// Error type shared by all modules of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the range supported by the implementation.
    #[error("configuration error: {0}")]
    Config(String),
    /// An input violates a mathematical precondition of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input exceeds the range covered by a precomputed table.
    #[error("range error: {0}")]
    Range(String),
    /// A quadrature or series did not converge to the requested tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A construction would exceed the configured memory budget.
    #[error("resource error: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
