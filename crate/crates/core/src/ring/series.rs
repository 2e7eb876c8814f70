//! Truncated parameter series (Z/p^s)[t]/(t^M) with the Frobenius lift
//! t -> t^p and the derivations d/dt, t·d/dt.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Derivation, Packing, PadicRing, Ring, Zmod};
use crate::error::{Error, Result};

/// A truncated series; coefficient of t^k at index k, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series(pub Vec<BigUint>);

impl Series {
    pub fn coeff(&self, k: usize) -> BigUint {
        self.0.get(k).cloned().unwrap_or_default()
    }

    fn trim(mut v: Vec<BigUint>) -> Series {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Series(v)
    }
}

/// Series ring context: a scalar base ring plus the truncation cap M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesRing {
    base: Zmod,
    cap: usize,
}

impl SeriesRing {
    pub fn new(p: u64, s: u32, cap: usize) -> Self {
        assert!(cap >= 1, "series cap must be positive");
        SeriesRing {
            base: Zmod::new(p, s),
            cap,
        }
    }

    pub fn base(&self) -> &Zmod {
        &self.base
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Build a series from signed integer coefficients (low degree first).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Series {
        let v = coeffs
            .iter()
            .take(self.cap)
            .map(|&c| self.base.reduce_i64(c))
            .collect();
        Series::trim(v)
    }

    /// The monomial c·t^k.
    pub fn monomial(&self, c: i64, k: usize) -> Series {
        if k >= self.cap {
            return Series(vec![]);
        }
        let mut v = vec![BigUint::zero(); k + 1];
        v[k] = self.base.reduce_i64(c);
        Series::trim(v)
    }
}

impl Ring for SeriesRing {
    type Elem = Series;

    fn zero(&self) -> Series {
        Series(vec![])
    }

    fn one(&self) -> Series {
        Series::trim(vec![self.base.one()])
    }

    fn from_i64(&self, n: i64) -> Series {
        Series::trim(vec![self.base.reduce_i64(n)])
    }

    fn add(&self, a: &Series, b: &Series) -> Series {
        let n = a.0.len().max(b.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.base.add(&a.coeff(k), &b.coeff(k)));
        }
        Series::trim(v)
    }

    fn neg(&self, a: &Series) -> Series {
        Series(a.0.iter().map(|c| self.base.neg(c)).collect())
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        if a.0.is_empty() || b.0.is_empty() {
            return Series(vec![]);
        }
        let n = (a.0.len() + b.0.len() - 1).min(self.cap);
        let mut v = vec![BigUint::zero(); n];
        for (i, ca) in a.0.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.0.iter().enumerate() {
                if i + j >= self.cap {
                    break;
                }
                v[i + j] += ca * cb;
            }
        }
        for c in v.iter_mut() {
            *c = self.base.reduce_big(c);
        }
        Series::trim(v)
    }

    fn is_zero(&self, a: &Series) -> bool {
        a.0.is_empty()
    }

    fn is_unit(&self, a: &Series) -> bool {
        a.0.first().is_some_and(|c| self.base.is_unit(c))
    }

    fn inverse(&self, a: &Series) -> Result<Series> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit {
                valuation: self.valuation(a),
            });
        }
        // back-substitution: b_k = -a_0^{-1} sum_{i=1..k} a_i b_{k-i}
        let inv0 = self.base.inverse(&a.coeff(0))?;
        let mut b = vec![BigUint::zero(); self.cap];
        b[0] = inv0.clone();
        for k in 1..self.cap {
            let mut acc = BigUint::zero();
            for i in 1..=k.min(a.0.len().saturating_sub(1)) {
                acc += &a.0[i] * &b[k - i];
            }
            let acc = self.base.reduce_big(&acc);
            b[k] = self.base.mul(&inv0, &self.base.neg(&acc));
        }
        Ok(Series::trim(b))
    }

    fn frobenius(&self, a: &Series) -> Series {
        let p = self.base.prime() as usize;
        let mut v = vec![BigUint::zero(); (a.0.len() * p).min(self.cap)];
        for (k, c) in a.0.iter().enumerate() {
            if k * p < self.cap {
                v[k * p] = c.clone();
            }
        }
        Series::trim(v)
    }

    fn derive(&self, a: &Series, kind: Derivation) -> Series {
        match kind {
            Derivation::Ddt => {
                let mut v = Vec::with_capacity(a.0.len().saturating_sub(1));
                for k in 1..a.0.len() {
                    v.push(self.base.mul(&a.0[k], &self.base.reduce_i64(k as i64)));
                }
                Series::trim(v)
            }
            Derivation::Theta => {
                let v = a
                    .0
                    .iter()
                    .enumerate()
                    .map(|(k, c)| self.base.mul(c, &self.base.reduce_i64(k as i64)))
                    .collect();
                Series::trim(v)
            }
        }
    }

    fn format_elem(&self, a: &Series) -> String {
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

    fn packing(&self) -> Option<Packing> {
        self.base.packing().map(|p| Packing {
            width: self.cap,
            modulus: p.modulus,
        })
    }

    fn pack_into(&self, a: &Series, out: &mut [u64]) {
        out.fill(0);
        for (k, c) in a.0.iter().enumerate() {
            out[k] = c.to_u64().expect("packed coefficient fits u64");
        }
    }

    fn unpack(&self, words: &[u64]) -> Series {
        Series::trim(words.iter().map(|&w| BigUint::from(w)).collect())
    }
}

impl PadicRing for SeriesRing {
    fn prime(&self) -> u64 {
        self.base.prime()
    }

    fn precision(&self) -> u32 {
        self.base.precision()
    }

    fn modulus(&self) -> &BigUint {
        self.base.modulus()
    }

    fn valuation(&self, a: &Series) -> u32 {
        a.0.iter()
            .map(|c| self.base.val(c))
            .min()
            .unwrap_or_else(|| self.base.precision())
    }

    fn with_precision(&self, s: u32) -> Self {
        SeriesRing::new(self.base.prime(), s, self.cap)
    }

    fn reduce_elem(&self, a: &Series) -> Series {
        Series::trim(
            a.0.iter()
                .take(self.cap)
                .map(|c| self.base.reduce_big(c))
                .collect(),
        )
    }

    fn exact_div_p(&self, a: &Series) -> Result<Series> {
        let mut v = Vec::with_capacity(a.0.len());
        for c in &a.0 {
            v.push(self.base.exact_div_p(c)?);
        }
        Ok(Series::trim(v))
    }

    fn t_cap(&self) -> Option<usize> {
        Some(self.cap)
    }

    fn truncate_t(&self, a: &Series, deg: usize) -> Series {
        Series::trim(a.0.iter().take(deg).cloned().collect())
    }

    fn sigma_is_identity(&self) -> bool {
        false
    }

    fn is_unit_up_to_t(&self, a: &Series) -> bool {
        a.0.iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| self.base.is_unit(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_examples() {
        let r = SeriesRing::new(3, 2, 10);
        let g = r.from_coeffs(&[1, 1]);
        assert_eq!(r.frobenius(&g), r.from_coeffs(&[1, 0, 0, 1]));
        let g = r.monomial(1, 4);
        assert_eq!(r.frobenius(&g), r.zero());
        let r = SeriesRing::new(5, 2, 20);
        let g = r.from_coeffs(&[2, 1, 1]);
        let f = r.frobenius(&g);
        assert_eq!(f.coeff(0), BigUint::from(2u8));
        assert_eq!(f.coeff(5), BigUint::from(1u8));
        assert_eq!(f.coeff(10), BigUint::from(1u8));
    }

    #[test]
    fn derivations() {
        let r = SeriesRing::new(5, 2, 10);
        let t3 = r.monomial(1, 3);
        assert_eq!(r.derive(&t3, Derivation::Theta), r.monomial(3, 3));
        assert_eq!(r.derive(&r.from_i64(7), Derivation::Ddt), r.zero());
        let g = r.from_coeffs(&[1, 12]);
        assert_eq!(r.derive(&g, Derivation::Theta), r.monomial(12, 1));
    }

    #[test]
    fn inverse_of_unit_series() {
        let r = SeriesRing::new(3, 2, 8);
        let a = r.from_coeffs(&[1, 12]);
        let inv = r.inverse(&a).unwrap();
        assert_eq!(r.mul(&a, &inv), r.one());
        assert!(r.inverse(&r.monomial(1, 1)).is_err());
    }

    #[test]
    fn frobenius_multiplicative_below_cap() {
        let r = SeriesRing::new(3, 2, 30);
        let g = r.from_coeffs(&[1, 2, 3]);
        let h = r.from_coeffs(&[4, 0, 1]);
        // supports stay below cap/p, so sigma(gh) = sigma(g)sigma(h) exactly
        assert_eq!(
            r.frobenius(&r.mul(&g, &h)),
            r.mul(&r.frobenius(&g), &r.frobenius(&h))
        );
    }
}
