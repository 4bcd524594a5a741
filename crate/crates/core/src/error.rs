use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the supported domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value violates the invariants of the type being constructed.
    #[error("invalid construction: {0}")]
    Construction(String),

    /// Two operators defined over different mode spaces were combined.
    #[error("operators live on different mode spaces")]
    SpaceMismatch,

    /// A basis map could not be inverted.
    #[error("singular basis map (condition number {0:e})")]
    Singular(f64),

    /// The truncated Fock oracle would exceed its dimension bound.
    #[error("Fock space dimension {dim} exceeds bound {bound}")]
    DimensionBound { dim: usize, bound: usize },

    /// Malformed configuration or command-line value.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
