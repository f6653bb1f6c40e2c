use std::io;

use thiserror::Error;

/// Broad category of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Ingest { line: usize, message: String },

    #[error("empty snapshot")]
    EmptySnapshot,

    #[error("node {0} is not part of the snapshot")]
    UnknownNode(u64),

    #[error("pair state requires two distinct nodes, got {0} twice")]
    SameNode(u64),

    #[error("triple {0:?} does not contain three distinct nodes")]
    InvalidTriple([u64; 3]),

    #[error("triple {0:?} never forms a triangle in the tracked sequence")]
    NotInUniverse([u64; 3]),

    #[error("type mapping: {0}")]
    Mapping(String),

    #[error("invalid sample plan: {0}")]
    SamplePlan(String),

    #[error("invalid snapshot sequence: {0}")]
    Sequence(String),

    #[error("transition origin {origin} must precede destination {destination} (sequence has {len} snapshots)")]
    TransitionOrder {
        origin: usize,
        destination: usize,
        len: usize,
    },

    #[error("{what} needs about {needed} bytes, over the budget of {budget} bytes; sample the graph first")]
    Resource {
        what: &'static str,
        needed: u64,
        budget: u64,
    },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Mapping(_) | Error::SamplePlan(_) | Error::Config(_) => ErrorKind::Config,
            Error::Resource { .. } => ErrorKind::Resource,
            Error::TransitionOrder { .. } => ErrorKind::Config,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
