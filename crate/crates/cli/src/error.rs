use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    /// `pointer` is a JSON pointer into the scene file, empty for the root.
    #[error("schema violation at {}: {message}", display_pointer(.pointer))]
    Schema { pointer: String, message: String },
    #[error("invalid geometry at {}: {source}", display_pointer(.pointer))]
    Geometry {
        pointer: String,
        source: shearlab::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

fn display_pointer(p: &str) -> &str {
    if p.is_empty() {
        "/"
    } else {
        p
    }
}

impl CliError {
    pub fn geometry(pointer: impl Into<String>, source: shearlab::Error) -> Self {
        Self::Geometry {
            pointer: pointer.into(),
            source,
        }
    }

    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// 2 for anything wrong with the input or its geometry, 3 for bugs.
    /// Exit code 1 is reserved for failed checks and never comes from here.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Schema { .. } | Self::Geometry { .. } | Self::Usage(_) => 2,
            Self::Internal(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
