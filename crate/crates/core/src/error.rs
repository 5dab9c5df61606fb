use std::path::PathBuf;

/// Errors raised across the library and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrand is not finite at node {index} (x = {x}): {value}")]
    Evaluation { index: usize, x: f64, value: f64 },

    #[error("simplex initialization failed: objective is not finite at any vertex")]
    SimplexInit,

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
