use thiserror::Error;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_USAGE: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    /// Inputs parsed but violate an invariant or a precondition.
    #[error("{kind}: {message}")]
    Invalid { kind: String, message: String },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Output(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) | CliError::Io { .. } => EXIT_PARSE,
            CliError::Invalid { .. } => EXIT_VALIDATION,
            CliError::Output(_) => 1,
        }
    }

    /// Tags the error with the name of its enum variant, e.g. `RowNotStochastic`.
    pub fn invalid(err: &(impl std::fmt::Debug + std::fmt::Display)) -> Self {
        let debug = format!("{err:?}");
        let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
        CliError::Invalid {
            kind,
            message: err.to_string(),
        }
    }
}
