//! Exit-code discipline: 0 success, 1 usage/config error, 2 data error,
//! 3 numerical failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(lexent::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(lexent::Error::Parameter(_)) => 1,
            CliError::Lib(lexent::Error::Numerical(_)) => 3,
            CliError::Lib(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<lexent::Error> for CliError {
    fn from(e: lexent::Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
