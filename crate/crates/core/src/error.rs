use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by construction, certification, and decision routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A size or search space exceeds what can be addressed or enumerated.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Input violates an operation's preconditions.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no Hadamard matrix of order {0} in the catalog")]
    NotInCatalog(usize),

    /// The Hadamard matrix does not diagonalize the Laplacian.
    #[error("certification failed: {0}")]
    Certification(String),

    /// No column of the Hadamard matrix is constant after signing.
    #[error("alignment failed: {0}")]
    Alignment(String),

    /// A construction's stated hypotheses do not hold for the input.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("matrix is not diagonalized by the standard Hadamard matrix: {0}")]
    NotStandardDiagonalizable(String),

    /// Floating-point oracle failure or disagreement beyond tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The approximant scan stopped before finding enough pairs.
    #[error("approximant scan stopped after {scanned} candidates with {} of {wanted} pairs", found.len())]
    Horizon {
        found: Vec<(BigInt, BigInt)>,
        wanted: usize,
        scanned: usize,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A result contradicts a proven identity; indicates a bug or corrupt fixture.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
