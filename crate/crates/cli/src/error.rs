use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Schema(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Input { .. } => 3,
            CliError::Schema(_) => 4,
            CliError::Config(_) => 5,
            CliError::Output { .. } => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Internal(_) => "internal",
            CliError::Usage(_) => "usage",
            CliError::Input { .. } => "unreadable_input",
            CliError::Schema(_) => "schema_violation",
            CliError::Config(_) => "invalid_config",
            CliError::Output { .. } => "output_failure",
        }
    }

    fn path(&self) -> Option<String> {
        match self {
            CliError::Input { path, .. } | CliError::Output { path, .. } => {
                Some(path.display().to_string())
            }
            _ => None,
        }
    }

    /// Machine-readable description written to stderr on failure.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body {
            kind: &'static str,
            exit_code: i32,
            message: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            path: Option<String>,
        }
        #[derive(Serialize)]
        struct Doc {
            schema_version: &'static str,
            error: Body,
        }
        serde_json::to_string(&Doc {
            schema_version: ccnet::SCHEMA_VERSION,
            error: Body {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.to_string(),
                path: self.path(),
            },
        })
        .expect("error document serializes")
    }
}

impl From<ccnet::Error> for CliError {
    fn from(e: ccnet::Error) -> Self {
        match e {
            ccnet::Error::Io { path, source } => CliError::Input {
                path,
                message: source.to_string(),
            },
            ccnet::Error::MissingColumn { .. } | ccnet::Error::Csv { .. } => {
                CliError::Schema(e.to_string())
            }
            ccnet::Error::InvalidConfig(m) => CliError::Config(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}
