use std::path::PathBuf;

/// Errors raised by the simulator.
///
/// Each variant maps onto one CLI exit code through [`Error::exit_code`].
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument lies outside the domain where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("model error: {0}")]
    Model(String),

    #[error("numerical instability at step {step}: {reason}")]
    Instability {
        step: u64,
        reason: String,
        dump: Option<PathBuf>,
    },

    /// A run finished but a requested measurement could not be extracted.
    #[error("diagnostic error: {0}")]
    Diagnostic(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 configuration, 2 runtime instability, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) => 1,
            Error::Model(_) | Error::Instability { .. } | Error::Diagnostic(_) => 2,
            Error::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
