use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not fit the requested operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// Composite dimension exceeds the configured cap.
    #[error("dimension {requested} exceeds the configured maximum {max}")]
    Dimension { requested: usize, max: usize },

    /// The truncated basis is too small for the requested state.
    #[error("truncation error: {message}")]
    Truncation {
        message: String,
        /// Smallest dimension that would satisfy the tail bound, when known.
        required_dim: Option<usize>,
    },

    #[error("numeric error (dim {dim}): {message}")]
    Numeric { dim: usize, message: String },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn numeric(dim: usize, message: impl Into<String>) -> Self {
        Error::Numeric {
            dim,
            message: message.into(),
        }
    }

    pub(crate) fn truncation(message: impl Into<String>, required_dim: Option<usize>) -> Self {
        Error::Truncation {
            message: message.into(),
            required_dim,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Parameter(_) => 2,
            Error::Truncation { .. } | Error::Dimension { .. } => 3,
            Error::Numeric { .. } | Error::Shape(_) => 4,
            Error::Degenerate(_) | Error::Unsupported(_) => 5,
            Error::Io(_) => 6,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
