//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("mixed ambient spaces: {0}")]
    MixedAmbient(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("invalid web: {0}")]
    InvalidWeb(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("invalid stranding: {0}")]
    InvalidStranding(String),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid tableau: {0}")]
    Tableau(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
