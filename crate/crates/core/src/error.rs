//! Error type shared by all modules of this crate.

/// Errors produced by samplers, objectives, estimators, and optimizers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The requested dimension was zero.
    #[error("dimension must be at least 1")]
    ZeroDimension,

    /// A vector argument did not match the expected dimension.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// An input vector contained a NaN or infinite component.
    #[error("non-finite component in {what}")]
    NonFinite { what: &'static str },

    /// An objective evaluation produced a NaN or infinite value. Carries the
    /// point at which the evaluation failed.
    #[error("objective evaluation is non-finite at theta = {theta:?}")]
    NonFiniteEvaluation { theta: Vec<f64> },

    /// A scalar or count argument violated its documented range.
    #[error("invalid argument `{name}`: {message}")]
    InvalidArgument { name: &'static str, message: String },

    /// The reference vector of a relative-error computation has zero norm,
    /// so the error is undefined.
    #[error("relative error is undefined: reference vector has zero norm")]
    ZeroReferenceNorm,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
