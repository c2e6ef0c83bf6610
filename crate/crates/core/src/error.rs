use thiserror::Error;

use crate::model::{LinkId, RequestId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulation level {0}")]
    InvalidLevel(u8),
    #[error("slot {slot} on link {link} is already occupied")]
    Overlap { link: LinkId, slot: usize },
    #[error("request {0} has no active allocation")]
    UnknownRequest(RequestId),
    #[error("request {0} is already allocated")]
    DuplicateRequest(RequestId),
    #[error("no link between nodes {0} and {1}")]
    MissingLink(usize, usize),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("metric window contains no requests")]
    EmptyWindow,
    #[error("reports are not comparable: {0}")]
    MismatchedStream(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
