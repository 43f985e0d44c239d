use thiserror::Error;

use crate::decomp::CoverWitness;

/// Errors raised by the library. A `false` verdict is never an error; these
/// variants describe inputs that could not be judged at all.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The input does not have the required graph shape (dangling ids, not a
    /// path, not a tree, disconnected, ...).
    #[error("structural error: {0}")]
    Structural(String),
    /// A value lies outside the domain of the operation (foreign order
    /// element, s = t, unknown vertex, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation's documented precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An exact search would exceed the configured size guard.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    /// A construction that should always succeed did not.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    /// Malformed interchange input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Cross-free separation families need the cover hypothesis to fail;
    /// the cover found is attached.
    #[error("cover hypothesis violated at boundary ({}, {})", .0.s, .0.t)]
    CoverHypothesis(Box<CoverWitness>),
}

pub type Result<T> = std::result::Result<T, Error>;
