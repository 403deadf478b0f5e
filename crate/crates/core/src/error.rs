//! Error types shared across the crate.

use thiserror::Error;

/// Problems with an interaction, basis or configuration supplied as input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("state count must be at least 1")]
    NoStates,
    #[error("state {state} out of range for {states} states")]
    StateOutOfRange { state: usize, states: usize },
    #[error("loop edge at pair ({0}, {1})")]
    LoopEdge(usize, usize),
    #[error("site graph is invalid: {0}")]
    InvalidGraph(String),
    #[error("basis vector has length {found}, expected {expected}")]
    BasisLength { expected: usize, found: usize },
}

/// A configured work bound was hit. The underlying computation terminates
/// mathematically; the bound only exists to keep runs predictable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what}: required {required}, cap {cap}")]
pub struct ResourceError {
    pub what: &'static str,
    pub required: u128,
    pub cap: u128,
}

impl ResourceError {
    pub fn new(what: &'static str, required: u128, cap: u128) -> Self {
        ResourceError { what, required, cap }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("undecided, resources exceeded: {0}")]
    Resources(#[from] ResourceError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An emitted certificate failed independent re-verification.
    #[error("internal soundness failure: {0}")]
    Soundness(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
