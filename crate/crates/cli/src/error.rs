use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] purify::Error),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Json(_) | CliError::Io { .. } | CliError::Csv(_) => 2,
            CliError::Core(e) => match e {
                purify::Error::Degeneracy { .. } => 4,
                purify::Error::NumericalFailure(_)
                | purify::Error::EmptyOutcome(_)
                | purify::Error::NotHermitian(_)
                | purify::Error::NotUnitTrace(_)
                | purify::Error::NotPositive(_)
                | purify::Error::NonFinite
                | purify::Error::NotUnitary(_) => 3,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
