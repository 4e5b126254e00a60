use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] hobo_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config: {0}")]
    Config(String),
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config: {0}")]
    TomlWrite(#[from] toml::ser::Error),
    #[error("manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("output directory {path} is not writable: {source}")]
    Unwritable { path: PathBuf, source: std::io::Error },
    #[error("{path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },
    #[error("coefficients are not BO-compatible (3ac/4d = {lhs}, b = {b}); pass --override-compat to run anyway")]
    Incompatible { lhs: f64, b: f64 },
    #[error("thread pool: {0}")]
    Threads(String),
}

impl LabError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        LabError::Io { path: path.to_path_buf(), source }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
