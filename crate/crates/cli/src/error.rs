use std::fmt;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    SuiteFailure = 1,
    InvalidConfig = 2,
    BudgetExhausted = 3,
    CertificateFailure = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Budget(String),
    Certificate(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Invalid(_) => ExitStatus::InvalidConfig,
            CliError::Budget(_) => ExitStatus::BudgetExhausted,
            CliError::Certificate(_) => ExitStatus::CertificateFailure,
            CliError::Io(_) => ExitStatus::InvalidConfig,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid configuration: {m}"),
            CliError::Budget(m) => write!(f, "budget exhausted: {m}"),
            CliError::Certificate(m) => write!(f, "certificate failure: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<amenable::Error> for CliError {
    fn from(e: amenable::Error) -> Self {
        match e {
            amenable::Error::Budget(_) => CliError::Budget(e.to_string()),
            amenable::Error::Calibration { .. } => CliError::Certificate(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
