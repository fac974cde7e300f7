use ugvrl_core::DomainError;

/// Exit-code contract: 0 success, 1 runtime error, 2 usage/config error.
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The invocation itself is wrong (bad flag combinations, zero counts).
    #[error("{0}")]
    Usage(String),

    /// A config or model file is unreadable, malformed, or inconsistent
    /// with the requested run.
    #[error("{0}")]
    Config(String),

    /// Everything else: IO failures, training aborts.
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<DomainError> for CliError {
    fn from(err: DomainError) -> Self {
        match err {
            DomainError::InvalidConfig(_) | DomainError::ObservationSpaceMismatch { .. } => {
                CliError::Config(err.to_string())
            }
            other => CliError::Runtime(anyhow::Error::new(other)),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(anyhow::Error::new(err))
    }
}
