//! Exact coefficient rings: integers mod p^s, truncated parameter series
//! over them, exact integer polynomials, and matrices over any of these.
//!
//! Rings follow the context pattern: a lightweight ring object carries the
//! modulus data and operates on plain element values. Elements of two ring
//! objects are compatible only when the objects compare equal; higher-level
//! containers (polynomials, matrices) enforce this.

mod intpoly;
mod matrix;
mod series;
mod zmod;

pub use intpoly::{IntPoly, IntPolyRing};
pub use matrix::Matrix;
pub use series::{Series, SeriesRing};
pub use zmod::Zmod;

use num_bigint::BigUint;

use crate::error::Result;

/// Derivations available on the parameter rings.
///
/// `Ddt` is d/dt, `Theta` is t·d/dt. On constant rings both act as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivation {
    Ddt,
    Theta,
}

/// Word-packed element layout used by the dense polynomial kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packing {
    /// Words per element (series cap, or 1 for scalars).
    pub width: usize,
    /// Common modulus of every word, guaranteed to fit in u64.
    pub modulus: u64,
}

/// A commutative coefficient ring with a Frobenius lift and derivations.
pub trait Ring: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;

    /// Multiplicative inverse of a unit; `NotAUnit` otherwise.
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// The Frobenius lift: identity on scalars, t -> t^p on series.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    /// Apply a derivation. Zero on scalar rings.
    fn derive(&self, a: &Self::Elem, kind: Derivation) -> Self::Elem;

    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Dense kernel packing, when elements fit machine words.
    fn packing(&self) -> Option<Packing> {
        None
    }

    /// Write `a` into exactly `packing().width` words.
    fn pack_into(&self, _a: &Self::Elem, _out: &mut [u64]) {
        unreachable!("ring has no packing")
    }

    /// Rebuild an element from packed words (already reduced).
    fn unpack(&self, _words: &[u64]) -> Self::Elem {
        unreachable!("ring has no packing")
    }
}

/// Rings of the form (Z/p^s)[...]: expose the prime, the precision and
/// p-adic valuations, and support moving elements between precisions.
pub trait PadicRing: Ring {
    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    fn modulus(&self) -> &BigUint;

    /// p-adic valuation capped at the precision; `precision()` for zero.
    /// For series this is the minimum over stored coefficients.
    fn valuation(&self, a: &Self::Elem) -> u32;

    /// Same ring family at a different precision.
    fn with_precision(&self, s: u32) -> Self;

    /// Reduce an element produced at a higher precision into this ring.
    fn reduce_elem(&self, a: &Self::Elem) -> Self::Elem;

    /// Exact division by p of an element produced at precision `s+1`,
    /// yielding a well-defined element of this ring at precision `s`.
    fn exact_div_p(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Truncation cap of the parameter series, if any.
    fn t_cap(&self) -> Option<usize> {
        None
    }

    /// Drop t-degrees >= `deg`. No-op on scalar rings.
    fn truncate_t(&self, a: &Self::Elem, _deg: usize) -> Self::Elem {
        a.clone()
    }

    /// Whether the Frobenius lift is the identity map.
    fn sigma_is_identity(&self) -> bool;

    /// A unit after inverting the series parameter: true for c·t^k·(unit)
    /// in series rings, plain unit otherwise.
    fn is_unit_up_to_t(&self, a: &Self::Elem) -> bool {
        self.is_unit(a)
    }
}

/// p^s as a big integer.
pub(crate) fn pow_modulus(p: u64, s: u32) -> BigUint {
    BigUint::from(p).pow(s)
}
