use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum SsopsError {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma evaluated at a non-positive integer.
    #[error("pole of the Gamma function at z = {0}")]
    Pole(f64),

    /// A numerical evaluation could not reach its accuracy target.
    #[error("accuracy not reached: estimated error {achieved:e} ({context})")]
    Accuracy { achieved: f64, context: String },

    /// The sampling grid cannot resolve the requested feature.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Inputs are well-formed but semantically invalid (e.g. an all-zero test family).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SsopsError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SsopsError::Domain(msg.into())
    }

    /// True for the accuracy and resolution outcomes (exit code 2 in the CLI).
    pub fn is_numerical(&self) -> bool {
        matches!(self, SsopsError::Accuracy { .. } | SsopsError::Resolution(_))
    }
}

pub type Result<T, E = SsopsError> = std::result::Result<T, E>;
