use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulation and approximation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid of {cells} cells exceeds the limit of {limit} cells")]
    GridTooLarge { cells: u64, limit: u64 },

    #[error("operator symbol vanishes at lattice frequency {m:?}")]
    Admissibility { m: Vec<i64> },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("need at least {needed} points with positive sigma in the fit range, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("admissibility precondition violated: {0}")]
    Precondition(String),

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed field dump: {0}")]
    Dump(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
