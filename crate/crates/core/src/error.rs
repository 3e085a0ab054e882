//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A raw letter sequence referenced a generator outside the declared rank.
    #[error("malformed word: generator index {index} out of range for rank {rank}")]
    MalformedWord { index: u32, rank: u32 },

    /// Two block elements over different surfaces were combined.
    #[error("surface mismatch: ({0}) vs ({1})")]
    SurfaceMismatch(String, String),

    #[error("boundary index {index} out of range 1..={count}")]
    BoundaryIndex { index: u32, count: u32 },

    /// Elements bound to different graphs were combined.
    #[error("graph mismatch")]
    GraphMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    /// Graph construction refused because validation found violations.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// Enumeration hit its memory guard; carries the count reached.
    #[error("resource guard exceeded after {count} elements")]
    Resource { count: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
