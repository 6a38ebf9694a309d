use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Verification(_) => "verification",
            CliError::Io(_) => "io",
        }
    }
}

impl From<exkn::Error> for CliError {
    fn from(e: exkn::Error) -> Self {
        match e {
            exkn::Error::Verification(_) => CliError::Verification(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
