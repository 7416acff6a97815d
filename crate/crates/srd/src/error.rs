use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("refused: {0}")]
    Budget(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Numeric(srd_core::Error),
}

impl From<srd_core::Error> for CliError {
    fn from(e: srd_core::Error) -> Self {
        use srd_core::Error as E;
        match e {
            E::Domain { .. } | E::Unsupported(_) | E::MissingDensity { .. } => CliError::Usage(e.to_string()),
            E::Budget { .. } => CliError::Budget(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Verification(_) => ExitCode::from(3),
            CliError::Budget(_) => ExitCode::from(4),
            _ => ExitCode::from(1),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
