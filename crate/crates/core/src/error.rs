//! Error taxonomy shared by the library and the CLI.
//!
//! The CLI maps these onto exit codes: configuration/usage problems
//! ([`Error::Domain`], [`Error::Unsupported`], [`Error::Contract`],
//! [`Error::Manifest`]) exit with 2, numeric verification failures
//! ([`Error::Validation`], [`Error::Construction`]) with 1.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A (kind, f) or parameter combination the construction does not cover.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Internal inconsistency detected while building a table (e.g. a
    /// duplicate zero) — signals a construction bug, never user input.
    #[error("construction inconsistency: {0}")]
    Construction(String),

    /// Caller broke an API contract (misaligned sample set, invalid config).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Requested evaluation point lies outside the safe truncation domain.
    #[error("truncation domain exceeded: {0}")]
    Truncation(String),

    /// Itemized verification failures from a validation suite.
    #[error("validation failed ({} items):\n{}", .0.len(), .0.join("\n"))]
    Validation(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Malformed or inconsistent manifest / serialized artifact.
    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
