//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    MeshFormat {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: face budget exceeded: {faces} faces after triangulation (cap {cap})")]
    FaceBudget {
        path: PathBuf,
        faces: usize,
        cap: usize,
    },

    /// Configuration problems (bad file, unknown keys, invalid ranges).
    /// The CLI maps these to exit code 2.
    #[error("config: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("asset library: {0}")]
    Library(String),

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("evaluation: {0}")]
    Eval(String),

    #[error("image: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
