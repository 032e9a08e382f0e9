use fracsource_core::Error as CoreError;

/// Failure of a run, classified by process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Condition(String),
    #[error("{0}")]
    Divergence(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Condition(_) => 2,
            CliError::Divergence(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::ConditionViolation(_)
            | CoreError::DenominatorDegenerate { .. }
            | CoreError::SeriesDivergence { .. } => CliError::Condition(msg),
            CoreError::IterationDivergence { .. }
            | CoreError::NoConvergence { .. }
            | CoreError::NonFinite(_)
            | CoreError::SingularSystem => CliError::Divergence(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
