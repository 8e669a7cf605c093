//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("level index {index} is outside the truncated space of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a {expected}-mode state, found {found} mode(s)")]
    ModeMismatch { expected: usize, found: usize },

    #[error("operator is not flagged Hermitian; build it with a Hermitian constructor")]
    NonHermitian,

    #[error("zero detuning: the effective two-photon coupling assumes an off-resonant drive")]
    ZeroDetuning,

    #[error("cutoff {cutoff} is below the recommended {recommended} for this initial amplitude; raise it or set the cutoff override")]
    CutoffTooSmall { cutoff: usize, recommended: usize },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("missing required configuration key(s): {0}")]
    MissingKey(String),

    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than runtime failure.
    /// The command-line tool maps these to exit code 2, the rest to 3.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
