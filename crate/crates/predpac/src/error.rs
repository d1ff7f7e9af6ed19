//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the probability model, learners, bounds, and the
/// experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    /// A value or parameter is outside its mathematical domain
    /// (non-probability vector, unsorted grid, epsilon outside (0,1), ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The observed prefix has probability zero under the process.
    #[error("prefix has zero probability under the process")]
    ImpossiblePrefix,

    /// An exhaustive computation was asked to exceed its size limits.
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// An operation that needs at least one observation got none.
    #[error("empty sample")]
    EmptySample,

    /// No records were available for an estimate.
    #[error("no trial records")]
    EmptyRecords,

    /// A bound cannot be inverted: even the loosest accuracy needs more
    /// samples than were provided.
    #[error("bound unreachable at n = {0}: even epsilon near 1 needs more samples")]
    Unreachable(u64),

    /// The operation is not defined for this process variant.
    #[error("unsupported process: {0}")]
    UnsupportedProcess(String),

    /// The experiment configuration is malformed or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
