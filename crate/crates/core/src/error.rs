use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or block layouts that do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// An input outside the operation's domain (not a projection, det² ≠ 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("reconstruction failed at step `{step}`: {detail}")]
    Reconstruction { step: String, detail: String },

    #[error("evaluator failed on sample {sample}: {source}")]
    Evaluator {
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("decode error: {0}")]
    Decode(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn reconstruction(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Reconstruction {
            step: step.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
