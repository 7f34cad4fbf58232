use thiserror::Error;

/// Errors raised by the algebra and evolution routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument: out-of-range index, mismatched domains, bad table.
    #[error("input error: {0}")]
    Input(String),

    /// The operation is not defined for this argument (e.g. reality test on a
    /// calculus that is not closed under inversion).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Non-finite values or a numerical routine that failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A normal-ordering rewrite exceeded its step budget.
    #[error("rewrite budget of {0} steps exhausted")]
    RewriteFuel(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
