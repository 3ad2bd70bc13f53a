//! Error types shared by all modules of this crate.

use thiserror::Error;

/// Errors produced by code construction, decoding, simulation and estimation.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (lengths, ranges, supports, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A size limit that keeps exhaustive enumeration tractable was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A fit or estimate cannot be formed from the available samples.
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;
