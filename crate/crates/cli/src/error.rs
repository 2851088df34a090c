use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Core(pmit_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<pmit_core::Error> for CliError {
    fn from(e: pmit_core::Error) -> Self {
        use pmit_core::Error as E;
        match e {
            E::Capacity(m) => CliError::Capacity(m),
            E::NotInvertible { .. } => CliError::Numeric(e.to_string()),
            E::InvalidParameter(_) | E::Parse(_) | E::DimensionMismatch(..) | E::QubitOutOfRange { .. } => CliError::Config(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    /// Process exit status: 2 config, 3 capacity, 4 numeric, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
