use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("RGB-only augmentation: {0}")]
    RgbOnly(String),

    #[error("bad magic: expected MBT1")]
    BadMagic,

    #[error("container format error: {0}")]
    Format(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unmapped region: {0}")]
    UnmappedRegion(String),

    #[error("empty split: {0}")]
    EmptySplit(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("png error: {0}")]
    Png(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
