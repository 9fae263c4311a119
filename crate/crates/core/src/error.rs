use thiserror::Error;

/// Errors raised by constructions and algebra.
///
/// Relation violations found by the validators are *not* errors; they are
/// collected in reports (see [`crate::square::ValidationReport`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid rack: {0}")]
    InvalidRack(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid trunk: {0}")]
    InvalidTrunk(String),

    #[error("invalid square map: {0}")]
    InvalidMap(String),

    #[error("construction would produce {estimated} cells, above the cap of {cap}")]
    TooLarge { estimated: u128, cap: u128 },

    #[error("degree {degree} is beyond the truncation dimension {max_dim}")]
    DegreeOverflow { degree: usize, max_dim: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
