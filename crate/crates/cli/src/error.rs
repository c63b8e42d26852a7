use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error(transparent)]
    Core(#[from] netchain_core::Error),
}

impl CliError {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation { path: path.into(), message: message.into() }
    }

    pub fn missing(attribute: &str) -> Self {
        CliError::MissingData(attribute.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
