use thiserror::Error;

/// Errors raised by the library. Verification failures are not errors; they
/// are reported through [`crate::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeLimit { degree: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("canonical moment sequence too short: need p_1..p_{needed}, have {available}")]
    InsufficientData { needed: usize, available: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
