use thiserror::Error;

/// Failure classes of the command-line tool, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<lisl_core::Error> for CliError {
    fn from(err: lisl_core::Error) -> Self {
        if err.is_input_error() {
            CliError::Input(err.to_string())
        } else {
            CliError::Config(err.to_string())
        }
    }
}
