//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by parsing, arithmetic and the verification operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A spec string did not match the grammar.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    /// Input outside an operation's domain (rational alpha, n <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quotient stream ran out before the requested depth or width.
    #[error("insufficient stream depth: have {available}, need {needed}")]
    StreamDepth { available: usize, needed: usize },

    /// A comparison could not be decided within the precision cap.
    #[error("undecided at precision cap ({cap} bits): {context}")]
    PrecisionCap { cap: u32, context: String },

    /// `gamma` coincides with some `n*alpha` modulo one; the norm is zero.
    #[error("degenerate gamma: |n*alpha - gamma| = 0 at n = {n}")]
    DegenerateGamma { n: String },

    /// Digit vector violates an admissibility constraint.
    #[error("invalid digits: {0}")]
    InvalidDigits(String),

    /// An internal certified identity failed; indicates a bug, never expected.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// A construction could not be completed within its resource budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// Hypotheses of a construction are not met by the supplied input.
    #[error("construction hypothesis failed at index {index}: {reason}")]
    Construction { index: usize, reason: String },

    /// I/O wrapper for the CLI.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default number of bits after which adaptive refinement gives up.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Reads the refinement cap, honouring the `DIOPH_PRECISION_CAP` override.
pub fn precision_cap() -> u32 {
    std::env::var("DIOPH_PRECISION_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_PRECISION_CAP)
}
