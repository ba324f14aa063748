use std::path::PathBuf;

use crate::graph::Side;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{side} index {index} out of range (count {count})")]
    Index { side: Side, index: usize, count: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group {group} has no member object selections; p(o|c) is undefined")]
    UndefinedDistribution { group: usize },

    #[error("user {user} joined no group")]
    NoMembership { user: usize },

    #[error("user {user} excluded: {reason}")]
    ExcludedUser { user: usize, reason: &'static str },

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("unknown algorithm {0:?} (expected md, hdh, ucf, icf, sd or blend)")]
    UnknownAlgorithm(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("dataset is empty after filtering")]
    EmptyDataset,

    #[error("unknown {kind} {id:?}")]
    UnknownLabel { kind: &'static str, id: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Index { .. } => "index",
            Error::InvalidArgument(_) => "argument",
            Error::UndefinedDistribution { .. } => "undefined_distribution",
            Error::NoMembership { .. } => "no_membership",
            Error::ExcludedUser { .. } => "excluded_user",
            Error::Protocol(_) => "protocol",
            Error::UnknownAlgorithm(_) => "unknown_algorithm",
            Error::Parse { .. } => "parse",
            Error::EmptyDataset => "empty_dataset",
            Error::UnknownLabel { .. } => "unknown_label",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
