use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates an invariant.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation received a position in the wrong reference frame.
    #[error("frame error: expected {expected} position, got {actual}")]
    Frame {
        expected: &'static str,
        actual: &'static str,
    },

    /// A function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A node or result cell could not be found.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// A malformed row in an input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// Input rows are individually valid but contradict each other.
    #[error("consistency error at line {line}: {message}")]
    Consistency { line: u64, message: String },

    /// Input data does not cover what the scenario needs.
    #[error("input error: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input data (as opposed to bad configuration).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Consistency { .. } | Error::Input(_) | Error::Io(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
