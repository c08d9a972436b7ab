use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An endpoint became NaN or infinite; the enclosure is unusable.
    #[error("enclosure failure: {0}")]
    EnclosureFailure(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: String, hi: String },

    #[error("cannot parse decimal literal {0:?}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The determinant enclosure contains zero.
    #[error("matrix is (possibly) singular: det ∈ {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
