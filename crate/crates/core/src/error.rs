use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parse error on line {line}: {message}")]
    ParseLine { line: usize, message: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("invalid lattice data: {0}")]
    InvalidLattice(String),
    #[error("invalid quotient type: {0}")]
    InvalidQuotient(String),
    #[error("weights ({weights}) do not generate Z/{order}; the stated order is wrong")]
    NonGenerating { order: String, weights: String },
    #[error("quotient type {0} is not well-formed; normalize it first")]
    IllFormed(String),
    #[error("element index {k} out of range 1..{order}")]
    IndexOutOfRange { k: String, order: String },
    #[error("smooth — minimal discrepancy undefined")]
    Smooth,
    #[error("dimension bound violated: n = {n} < m + r + 2l = {required}")]
    DimensionBound { n: usize, required: String },
    #[error("congruence violated: {order} is not 1 mod {modulus}")]
    Congruence { order: String, modulus: String },
    #[error("order {0} is too small; orders must be at least 2")]
    OrderTooSmall(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
