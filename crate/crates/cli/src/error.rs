use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Invariant(_) => 2,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<qec5_core::Error> for CliError {
    fn from(e: qec5_core::Error) -> Self {
        use qec5_core::Error as E;
        match e {
            E::InvalidConfig { .. }
            | E::OutOfRange { .. }
            | E::UnknownDephasingModel(_)
            | E::UnknownFidelityMode(_)
            | E::NoCalibrationRoot(_)
            | E::InvalidPauliLabel(_) => CliError::Config(e.to_string()),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
