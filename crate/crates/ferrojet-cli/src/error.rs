use ferrojet::coefficients::CoefficientError;
use ferrojet::magnetisation::MagnetisationError;
use ferrojet::profiles::ProfileError;
use ferrojet::reduced::ReducedError;
use ferrojet::specfun::SpecFunError;
use ferrojet::spectrum::SpectrumError;
use ferrojet::verify::VerifyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config error: {0}")]
    Config(#[from] toml::de::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }

    /// The reader went away (e.g. output piped into `head`).
    pub fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Io(e) => Some(e.kind()),
            CliError::Json(e) => e.io_error_kind(),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e.kind()),
                _ => None,
            },
            _ => None,
        };
        kind == Some(std::io::ErrorKind::BrokenPipe)
    }
}

impl From<MagnetisationError> for CliError {
    fn from(e: MagnetisationError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SpecFunError> for CliError {
    fn from(e: SpecFunError) -> Self {
        match e {
            SpecFunError::InvalidArgument(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Root(inner) => inner.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CoefficientError> for CliError {
    fn from(e: CoefficientError) -> Self {
        match e {
            CoefficientError::InvalidArgument(_) => CliError::Validation(e.to_string()),
            CoefficientError::TauDegenerate { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ReducedError> for CliError {
    fn from(e: ReducedError) -> Self {
        match e {
            ReducedError::InvalidArgument(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::InvalidArgument(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::InvalidArgument(_) | VerifyError::UnknownTag(_) => CliError::Validation(e.to_string()),
            VerifyError::Coefficient(inner) => inner.into(),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
