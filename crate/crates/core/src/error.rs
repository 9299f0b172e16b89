use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required column `{column}` in {file}")]
    MissingColumn {
        file: &'static str,
        column: &'static str,
    },

    #[error("malformed CSV in {file}: {source}")]
    Csv {
        file: &'static str,
        #[source]
        source: csv::Error,
    },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("empty universe: {0}")]
    EmptyUniverse(&'static str),

    #[error("empty sample passed to {0}")]
    EmptySample(&'static str),

    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    CycleCapExceeded {
        cap: u64,
        partial: Box<crate::metrics::cycles::CycleCensus>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
