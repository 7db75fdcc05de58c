use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The map hit a singular point (e.g. `sin(x) == 0` for the sine-quadratic map).
    #[error("degenerate map state at iteration {iteration}")]
    DegenerateState { iteration: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("training loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("seed window has length {got}, model expects {expected}")]
    WindowMismatch { expected: usize, got: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bad magic in model file")]
    BadMagic,

    #[error("unsupported model file version {0}")]
    UnsupportedVersion(u32),

    #[error("model file is truncated")]
    TruncatedFile,

    #[error("model file checksum mismatch")]
    ChecksumMismatch,

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero variance in sampled pixel pairs")]
    ZeroVariance,

    #[error("{test} requires at least {required} bits")]
    TooShort { test: &'static str, required: usize },

    #[error("image format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Errors caused by malformed or unreadable external data, as opposed to
    /// domain failures inside the numerics.
    pub fn is_io_or_format(&self) -> bool {
        matches!(
            self,
            Error::Io(_)
                | Error::Format(_)
                | Error::BadMagic
                | Error::UnsupportedVersion(_)
                | Error::TruncatedFile
                | Error::ChecksumMismatch
                | Error::InvalidKey(_)
        )
    }
}
