use thiserror::Error;

/// Error type shared by the whole crate.
///
/// `InvalidInput` and `InvalidModel` are caller mistakes (bad dimensions,
/// out-of-domain parameters, inconsistent kernels); `NotApplicable` means a
/// bound was requested for a weight class it does not cover;
/// `GenerationFailure` means a randomized constructor exhausted its retry
/// budget; `Inconsistency` means an internal cross-check disagreed with the
/// primary computation and the result cannot be trusted.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("generation failure: {0}")]
    GenerationFailure(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: caller errors exit 2, detected
    /// internal inconsistencies exit 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistency(_) => 3,
            _ => 2,
        }
    }
}
