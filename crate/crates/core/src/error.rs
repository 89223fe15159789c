use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The command-line front end maps [`Error::Internal`] to exit status 2 and
/// every other variant to exit status 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields ({0} and {1})")]
    FieldMismatch(String, String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("{0}")]
    Usage(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
