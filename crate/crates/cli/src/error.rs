use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("{0}")]
    Domain(String),

    #[error("reproduction missed its tolerance: {0}")]
    Tolerance(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidState(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Tolerance(_) => 4,
            CliError::Io { .. } | CliError::Serialize(_) => 1,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}

// Core errors raised while computing are domain errors; state loading maps
// its own failures to InvalidState before they get here.
impl From<dualent_core::Error> for CliError {
    fn from(e: dualent_core::Error) -> Self {
        match e {
            dualent_core::Error::BadQ(q) => CliError::Domain(format!(
                "q = {q} is not allowed: the Tsallis family is defined for q > 0, q != 1 \
                 (q -> 1 recovers the von Neumann entropy, use that instead)"
            )),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
