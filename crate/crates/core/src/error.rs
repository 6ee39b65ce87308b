use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("author not found: {0:?}")]
    AuthorNotFound(String),

    #[error("text index is empty: no document produced any token")]
    IndexEmpty,

    #[error("cannot normalize an empty edge set")]
    EmptyEdgeSet,

    #[error("graphs do not share the same edge set")]
    GraphShapeMismatch,

    #[error("source and destination are the same node: {0:?}")]
    SameNode(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("invalid role criterion: t1 ({t1}) must be smaller than t2 ({t2})")]
    InvalidCriterion { t1: u64, t2: u64 },

    #[error("unsupported snapshot format version {found} (expected {expected})")]
    SnapshotVersion { found: u32, expected: u32 },

    #[error("inconsistent snapshot: {0}")]
    SnapshotInvalid(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
