use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: dimension mismatch, ill-defined map, non-composable shapes.
    #[error("input error: {0}")]
    Input(String),
    /// A documented precondition failed; the message names the violated equation.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Instance too large for exhaustive enumeration.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A multi-stage construction failed at the named stage.
    #[error("construction failed at {stage}: {message}")]
    Construction { stage: String, message: String },
    /// A step that should always succeed on certified inputs did not.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn construction(stage: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Construction {
            stage: stage.into(),
            message: message.into(),
        }
    }

    /// Prefix the message with a context string, keeping the variant.
    pub fn context(self, ctx: &str) -> Self {
        match self {
            Error::Input(m) => Error::Input(format!("{ctx}: {m}")),
            Error::Precondition(m) => Error::Precondition(format!("{ctx}: {m}")),
            Error::Capacity(m) => Error::Capacity(format!("{ctx}: {m}")),
            Error::Construction { stage, message } => Error::Construction {
                stage: format!("{ctx}/{stage}"),
                message,
            },
            Error::Internal(m) => Error::Internal(format!("{ctx}: {m}")),
            Error::Unsupported(m) => Error::Unsupported(format!("{ctx}: {m}")),
        }
    }
}
