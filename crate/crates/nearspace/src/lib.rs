//! Exact arithmetic for finite Dickson nearfields and the near-vector
//! spaces `R^n` built over them.
//!
//! A nearfield is a division ring that distributes on one side only.
//! Row spaces over a proper nearfield behave very differently from
//! vector spaces over a field: a handful of vectors can generate a
//! subgroup of exponentially larger dimension, and the number of
//! subgroups of `R^n` is governed by Stirling-number combinatorics
//! rather than Gaussian binomials.
//!
//! The crate is organised bottom-up:
//!
//! * [`ff`] — exact arithmetic in `GF(p^m)` with exp/log tables.
//! * [`nearfield`] — the Dickson twist on top of a finite field, plus an
//!   exhaustive axiom validator that every construction must pass.
//! * [`nvspace`] — vectors of `R^n`, the scalar action, and the
//!   canonical disjoint-support form of an `R`-subgroup.
//! * [`genclose`] — the subgroup generated by a set of vectors, computed
//!   two independent ways, with seed sets and maximal seed matrices.
//! * [`counting`] — exact subgroup counts by dimension, cross-checked
//!   against brute-force enumeration.
//!
//! The long-form guide lives in [`guide`]; its chapters double as doc
//! tests so every snippet in the book is compiled and run by
//! `cargo test`.

pub mod counting;
pub mod ff;
pub mod genclose;
pub mod guide;
pub mod nearfield;
pub mod nvspace;

pub use ff::{Field, FieldElement, FieldSpec};
pub use nearfield::{AxiomReport, DicksonPair, Nearfield, ValidationMode};
pub use nvspace::{CanonicalSubgroup, SimpleVector, Vector};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size {size} exceeds the configured cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("({q}, {n}) is not a Dickson pair: {reason}")]
    InvalidDicksonPair { q: u64, n: u32, reason: String },
    #[error("nearfield axiom validation failed: {0}")]
    AxiomValidationFailed(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not a member of the subgroup")]
    NotAMember,
    #[error("closure would reach {size} elements (dimension {dim}), cap is {cap}")]
    CapExceeded { dim: usize, size: u128, cap: u128 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
