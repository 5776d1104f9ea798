//! Word measures on unitary groups: free-group invariants of words and exact
//! moments of word maps as rational functions of the matrix size.

pub mod invariants;
pub mod montecarlo;
pub mod stallings;
pub mod surfaces;
pub mod weingarten;
pub mod whitehead;
pub mod words;

pub use words::{Letter, ParseError, Word};

/// Bumped whenever a cached result could change; part of every cache key.
pub const CACHE_STAMP: &str = concat!("wml-core/", env!("CARGO_PKG_VERSION"), "/report-1");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{resource} exceeded the cap of {limit}")]
    Cap { resource: &'static str, limit: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("n = {n} is below the validity threshold {n_min}")]
    BelowValidity { n: u64, n_min: u64 },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("internal error: {0}")]
    Internal(String),
}
