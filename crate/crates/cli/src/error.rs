use qshutter_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Usage { field: &'static str, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(field: &'static str, reason: impl Into<String>) -> Self {
        CliError::Usage { field, reason: reason.into() }
    }

    /// 2 for usage and configuration problems, 3 for invariant violations,
    /// 1 for IO and serialization failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } | CliError::Precondition(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}

impl CliError {
    /// The reader of our output went away, e.g. `qshutter ... | head`.
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

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::EvenCycles(n) => CliError::Precondition(format!(
                "the shutter device needs an odd number of cycles, got {n}"
            )),
            CoreError::InvalidCycles => CliError::usage("cycles", "must be at least 1"),
            CoreError::InvalidTheta(t) => CliError::usage("theta", format!("{t} is not a positive finite angle")),
            CoreError::InvalidQubit(n) => {
                CliError::usage("alpha/beta", format!("amplitudes must not both vanish (|α|²+|β|² = {n})"))
            }
            other => CliError::Invariant(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
