use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the region where the computation is defined,
    /// e.g. a point or a symbol value on or outside the unit circle.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The requested computation would need more coefficients than the
    /// working truncation order provides.
    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
