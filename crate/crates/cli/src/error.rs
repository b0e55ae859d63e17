//! CLI error type with the exit-code contract: validation and usage
//! problems exit 1, I/O failures exit 2, success exits 0.

use std::fmt;
use std::path::PathBuf;

/// CLI-level result alias.
pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unparseable or invalid config/state/CSV input — anything
    /// the user can fix by editing what they passed in. Exit code 1.
    Usage(String),
    /// The filesystem failed us: missing input file, unwritable output
    /// path, permission trouble. Exit code 2.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code mandated for this error class.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) => write!(f, "{message}"),
            CliError::Io { path, source } => {
                write!(f, "{}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<mpt_core::Error> for CliError {
    fn from(err: mpt_core::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}
