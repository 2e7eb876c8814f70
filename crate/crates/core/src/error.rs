//! Error types shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Inversion of an element with positive p-adic valuation.
    #[error("not a unit (valuation {valuation})")]
    NotAUnit { valuation: u32 },

    /// Matrix inversion requires the reduction mod (p, t) to be invertible.
    #[error("matrix not invertible modulo p (rank {rank} of {size} over F_p)")]
    NotInvertibleModP { rank: usize, size: usize },

    /// Operands built over different rings or different ambient dimensions.
    #[error("mismatched configuration: {0}")]
    Mismatch(String),

    /// The Cartier machinery assumes p > 2.
    #[error("prime {0} is unsupported here (p > 2 required)")]
    UnsupportedPrime(u64),

    /// Requested region is not open in the face topology, or empty.
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    /// A truncation cap is too small to certify the requested precision.
    #[error("precision shortfall: {0}")]
    PrecisionShortfall(String),

    /// Desk-scale guard exceeded (dimension or enumeration size).
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    /// Malformed problem description.
    #[error("configuration error: {0}")]
    Config(String),
}
