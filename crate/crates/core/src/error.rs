use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// The CLI maps these onto process exit codes, so each variant corresponds to
/// one class of failure rather than one call site.
#[derive(Debug, Error)]
pub enum GeoError {
    /// A precondition of an operation was not met (degree mismatch, step
    /// size, test function not vanishing at the endpoints, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed or inconsistent geometric data: mismatched complexes,
    /// degenerate cells, missing faces.
    #[error("structural error: {0}")]
    Structure(String),

    /// No feasible decomposition exists, e.g. a homogeneous filling of a
    /// current with boundary.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A vector field could not be evaluated where it was needed.
    #[error("field evaluation failed: {0}")]
    Evaluation(String),

    /// An operation or instance outside what this implementation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Argument outside the accepted domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeoError>;

impl From<serde_json::Error> for GeoError {
    fn from(e: serde_json::Error) -> Self {
        GeoError::Parse(e.to_string())
    }
}
