use thiserror::Error;

use crate::trace::RunTrace;

/// Errors raised by the optimization core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a non-empty archive")]
    EmptyArchive,

    #[error("archive insertion out of order: expected ordinal {expected}, got {got}")]
    OutOfOrder { expected: usize, got: usize },

    #[error("objective returned non-finite value {value} at evaluation {index}")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("point lies outside the search space on axis {axis}")]
    OutOfDomain { axis: usize },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    /// The rejection loop hit `max_proposals_per_eval`. The trace collected
    /// so far is preserved.
    #[error("proposal cap of {cap} exceeded while seeking evaluation {evaluation}")]
    ProposalCapExceeded {
        cap: u64,
        evaluation: usize,
        partial: Box<RunTrace>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
