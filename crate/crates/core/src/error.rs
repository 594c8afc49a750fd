//! Error taxonomy shared by every module in the crate.
//!
//! The variants are deliberately coarse: callers dispatch on the *kind* of
//! failure (structural input defect, empty-set input, precondition on a
//! mathematical operation, resource cap, internal invariant breach), not on
//! message text. The CLI maps these kinds onto its exit codes.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the core library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Structurally malformed input: mismatched dimensions, ragged rows,
    /// zero denominators, and similar defects that make an object unusable.
    #[error("structural error: {0}")]
    Structure(String),

    /// An operation received an empty set where a nonempty one is required
    /// (kept distinct from `Structure` so callers can tell "bad shape"
    /// from "vacuous input").
    #[error("empty-set input: {0}")]
    EmptyInput(String),

    /// A mathematical precondition failed: point outside the set, value not
    /// finite where finiteness is required, unbounded data where bounded is
    /// assumed, and so on.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The operation is well-posed but outside the supported fragment
    /// (e.g. an exact subdifferential for the Euclidean norm).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A configured resource cap was exceeded (row-count caps on
    /// combinatorial enumeration, iteration caps, ...).
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// An internal invariant failed. Seeing this is a bug in the crate.
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    /// Convenience constructor for [`Error::Structure`].
    pub fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    /// Convenience constructor for [`Error::Precondition`].
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
