pub mod container;
pub mod pgm;
pub mod yuv;

pub use container::{Container, ContainerHeader, FormatError};
pub use pgm::{read_pgm, write_pgm};
pub use yuv::{read_yuv, write_yuv};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::frame::PlaneError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("input too short: expected {expected} bytes, found {actual}")]
    ShortInput { expected: usize, actual: usize },
    #[error("pgm: {0}")]
    Pgm(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

impl IoError {
    pub(crate) fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File { path: path.to_owned(), source }
    }
}
