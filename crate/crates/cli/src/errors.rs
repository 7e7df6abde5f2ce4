use std::fmt;

/// CLI failure classes, mapped onto exit codes: validation problems exit
/// with 1, numeric failures with 2.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

/// Marks a core-library error as a numeric failure (exit code 2).
pub fn numeric(e: bilgamma_core::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

/// Marks a core-library error as an input-validation failure (exit code 1).
pub fn validation(e: bilgamma_core::Error) -> CliError {
    CliError::Validation(e.to_string())
}
