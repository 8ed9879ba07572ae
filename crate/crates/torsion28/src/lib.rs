//! Exact arithmetic for the family of rational elliptic curves with
//! torsion subgroup Z/2 x Z/8.
//!
//! The family is parametrized by t = a/b in (0,1) with a, b coprime of
//! opposite parity; every isomorphism class has a unique such parameter.
//! From the parameter the crate derives Weierstrass models, heights, the
//! conductor, per-prime local data (reduction type, Tamagawa numbers,
//! root number), Selmer groups by descent through the 2-isogeny chain
//! E -> E' -> E'', rank bounds, and the aggregate statistics of the
//! family.
//!
//! All arithmetic is exact: big integers for curve data, rationals for
//! points and averages. Floating point appears only when values are
//! formatted for output.

pub mod arith;
pub mod descent;
pub mod family;
pub mod local;
pub mod stats;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a precondition (zero where nonzero required,
    /// composite where a prime was required, degenerate parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured resource bound was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An invariant check ran and found a mismatch.
    #[error("verification failure: {0}")]
    Verification(String),
    /// An internal consistency check failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
