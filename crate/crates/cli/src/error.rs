use std::fmt;

/// Failure of a command, carrying the exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, configuration or parameters (exit 1).
    Usage(String),
    /// A solve or estimate failed numerically (exit 2).
    Numerical(String),
    /// Output could not be written (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn is_usage(err: &nlse_core::Error) -> bool {
        use nlse_core::Error::*;
        matches!(
            err,
            InvalidGrid(_) | InvalidInput(_) | InvalidParams(_) | ExistenceViolation(_) | Regime(_)
        )
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<nlse_core::Error> for CliError {
    fn from(e: nlse_core::Error) -> Self {
        if CliError::is_usage(&e) {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
