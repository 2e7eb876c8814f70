//! Exact integer polynomials in one parameter, used where modular
//! reduction must be avoided (formal group law logarithms).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Derivation, Ring};
use crate::error::{Error, Result};

/// An exact polynomial in t over Z; coefficient of t^k at index k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    fn trim(mut v: Vec<BigInt>) -> IntPoly {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        IntPoly(v)
    }
}

/// Z[t] with t -> t^p as Frobenius lift. `prime` only drives that lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolyRing {
    pub prime: u64,
}

impl IntPolyRing {
    pub fn new(prime: u64) -> Self {
        IntPolyRing { prime }
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> IntPoly {
        IntPoly::trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl Ring for IntPolyRing {
    type Elem = IntPoly;

    fn zero(&self) -> IntPoly {
        IntPoly(vec![])
    }

    fn one(&self) -> IntPoly {
        IntPoly(vec![BigInt::one()])
    }

    fn from_i64(&self, n: i64) -> IntPoly {
        IntPoly::trim(vec![BigInt::from(n)])
    }

    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        let n = a.0.len().max(b.0.len());
        IntPoly::trim((0..n).map(|k| a.coeff(k) + b.coeff(k)).collect())
    }

    fn neg(&self, a: &IntPoly) -> IntPoly {
        IntPoly(a.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.0.is_empty() || b.0.is_empty() {
            return IntPoly(vec![]);
        }
        let mut v = vec![BigInt::zero(); a.0.len() + b.0.len() - 1];
        for (i, ca) in a.0.iter().enumerate() {
            for (j, cb) in b.0.iter().enumerate() {
                v[i + j] += ca * cb;
            }
        }
        IntPoly::trim(v)
    }

    fn is_zero(&self, a: &IntPoly) -> bool {
        a.0.is_empty()
    }

    fn is_unit(&self, a: &IntPoly) -> bool {
        a.0.len() == 1 && a.0[0].abs().is_one()
    }

    fn inverse(&self, a: &IntPoly) -> Result<IntPoly> {
        if self.is_unit(a) {
            Ok(a.clone())
        } else {
            Err(Error::NotAUnit { valuation: 0 })
        }
    }

    fn frobenius(&self, a: &IntPoly) -> IntPoly {
        let p = self.prime as usize;
        if a.0.is_empty() {
            return IntPoly(vec![]);
        }
        let mut v = vec![BigInt::zero(); (a.0.len() - 1) * p + 1];
        for (k, c) in a.0.iter().enumerate() {
            v[k * p] = c.clone();
        }
        IntPoly::trim(v)
    }

    fn derive(&self, a: &IntPoly, kind: Derivation) -> IntPoly {
        match kind {
            Derivation::Ddt => IntPoly::trim(
                (1..a.0.len()).map(|k| a.0[k].clone() * BigInt::from(k)).collect(),
            ),
            Derivation::Theta => IntPoly::trim(
                a.0.iter()
                    .enumerate()
                    .map(|(k, c)| c * BigInt::from(k))
                    .collect(),
            ),
        }
    }

    fn format_elem(&self, a: &IntPoly) -> String {
        if a.0.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match k {
                0 => parts.push(c.to_string()),
                1 => parts.push(format!("{c}*t")),
                _ => parts.push(format!("{c}*t^{k}")),
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_polynomial_ops() {
        let r = IntPolyRing::new(5);
        let a = r.from_coeffs(&[1, 2]);
        let b = r.from_coeffs(&[-1, 0, 3]);
        assert_eq!(r.mul(&a, &b), r.from_coeffs(&[-1, -2, 3, 6]));
        assert_eq!(r.frobenius(&a), r.from_coeffs(&[1, 0, 0, 0, 0, 2]));
        assert_eq!(r.derive(&b, Derivation::Theta), r.from_coeffs(&[0, 0, 6]));
    }
}
