//! Exact p-adic computation of Hasse-Witt matrices, unit-root Frobenius
//! and connection matrices attached to a Laurent polynomial, together
//! with congruence verifiers, Cartier operator tables, vertex expansions,
//! formal group laws and brute-force point-count cross-checks.
//!
//! Everything is exact: residues mod p^s, truncated parameter series over
//! them, or exact integers and rationals. No floating point anywhere.

pub mod cartier;
pub mod crystal;
pub mod error;
pub mod expansion;
pub mod fgl;
pub mod fixtures;
pub mod laurent;
pub mod polytope;
pub mod report;
pub mod ring;
pub mod zeta;

pub use error::{Error, Result};
