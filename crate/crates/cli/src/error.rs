use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: dipolar_qb::Error,
    },
}

impl CliError {
    /// Process exit status: 1 for configuration and I/O problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric { .. } => 2,
            _ => 1,
        }
    }

    /// Adapter for `map_err` that tags a core error with its context.
    pub fn numeric(context: impl Into<String>) -> impl Fn(dipolar_qb::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Numeric {
            context: context.clone(),
            source,
        }
    }
}
