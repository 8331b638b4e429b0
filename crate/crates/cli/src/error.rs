use leibniz_moment::Error;
use thiserror::Error;

/// Exit status 2 for bad input, 1 for a computation that ran but did not verify.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisViolation { .. }
            | Error::NotSymmetricLeibniz { .. }
            | Error::GramNotPositive { .. }
            | Error::CertificationFailed { .. }
            | Error::NotCritical { .. }
            | Error::NotLie { .. }
            | Error::IrrationalType { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
