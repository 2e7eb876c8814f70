//! The ring Z/p^s with unit inversion by Hensel lifting.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{pow_modulus, Derivation, Packing, PadicRing, Ring};
use crate::error::{Error, Result};

/// Integers modulo p^s for an odd (or, outside the Cartier machinery,
/// even) prime p. Elements are residues in [0, p^s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zmod {
    p: u64,
    s: u32,
    modulus: BigUint,
}

impl Zmod {
    pub fn new(p: u64, s: u32) -> Self {
        assert!(s >= 1, "precision must be positive");
        Zmod {
            p,
            s,
            modulus: pow_modulus(p, s),
        }
    }

    /// Residue of an arbitrary big integer.
    pub fn reduce_big(&self, v: &BigUint) -> BigUint {
        v % &self.modulus
    }

    /// Residue of a signed integer.
    pub fn reduce_i64(&self, n: i64) -> BigUint {
        if n >= 0 {
            BigUint::from(n as u64) % &self.modulus
        } else {
            let r = BigUint::from(n.unsigned_abs()) % &self.modulus;
            if r.is_zero() {
                r
            } else {
                &self.modulus - r
            }
        }
    }

    /// p-adic valuation of a residue, capped at s (zero maps to s).
    pub fn val(&self, a: &BigUint) -> u32 {
        if a.is_zero() {
            return self.s;
        }
        let p = BigUint::from(self.p);
        let mut v = 0;
        let mut cur = a.clone();
        while (&cur % &p).is_zero() {
            cur /= &p;
            v += 1;
        }
        v.min(self.s)
    }

    /// p^r / r! as an exact element of Z_p reduced mod p^s.
    ///
    /// Writing r! = p^e·m with gcd(m, p) = 1, this is p^(r-e)·m^(-1);
    /// e < r/(p-1) < r, so the power is a nonnegative one.
    pub fn p_power_over_factorial(&self, r: u64) -> Result<BigUint> {
        if self.p == 2 {
            return Err(Error::UnsupportedPrime(2));
        }
        let mut e = 0u64;
        let mut m = BigUint::one();
        for k in 1..=r {
            let mut k = k;
            while k % self.p == 0 {
                e += 1;
                k /= self.p;
            }
            m = (m * k) % &self.modulus;
        }
        debug_assert!(e < r.max(1));
        let inv_m = self.inverse(&m)?;
        let pw = BigUint::from(self.p).modpow(&BigUint::from(r - e), &self.modulus);
        Ok(pw * inv_m % &self.modulus)
    }
}

fn mod_inv_u64(a: u64, p: u64) -> Option<u64> {
    // extended Euclid on machine words (p prime, a < p)
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

impl Ring for Zmod {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        if self.modulus.is_one() {
            BigUint::zero()
        } else {
            BigUint::one()
        }
    }

    fn from_i64(&self, n: i64) -> BigUint {
        self.reduce_i64(n)
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let r = a + b;
        if r >= self.modulus {
            r - &self.modulus
        } else {
            r
        }
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b % &self.modulus
    }

    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &BigUint) -> bool {
        !(a % self.p).is_zero()
    }

    fn inverse(&self, a: &BigUint) -> Result<BigUint> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit {
                valuation: self.val(a),
            });
        }
        // invert mod p on machine words, then Hensel-lift:
        // x -> x(2 - ax) doubles the precision each round.
        let a0 = (a % self.p).to_u64().expect("residue mod p fits u64");
        let x0 = mod_inv_u64(a0, self.p).expect("unit mod p");
        let mut x = BigUint::from(x0);
        let two = BigUint::from(2u8);
        let mut prec = 1u32;
        while prec < self.s {
            prec = (prec * 2).min(self.s);
            let m = pow_modulus(self.p, prec);
            let ax = a % &m * &x % &m;
            let corr = if two >= ax { &two - &ax } else { &m + &two - &ax };
            x = x * corr % &m;
        }
        Ok(x % &self.modulus)
    }

    fn frobenius(&self, a: &BigUint) -> BigUint {
        a.clone()
    }

    fn derive(&self, _a: &BigUint, _kind: Derivation) -> BigUint {
        BigUint::zero()
    }

    fn format_elem(&self, a: &BigUint) -> String {
        a.to_string()
    }

    fn packing(&self) -> Option<Packing> {
        self.modulus.to_u64().filter(|&m| m < (1 << 20)).map(|m| Packing {
            width: 1,
            modulus: m,
        })
    }

    fn pack_into(&self, a: &BigUint, out: &mut [u64]) {
        out[0] = a.to_u64().expect("packed residue fits u64");
    }

    fn unpack(&self, words: &[u64]) -> BigUint {
        BigUint::from(words[0])
    }
}

impl PadicRing for Zmod {
    fn prime(&self) -> u64 {
        self.p
    }

    fn precision(&self) -> u32 {
        self.s
    }

    fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    fn valuation(&self, a: &BigUint) -> u32 {
        self.val(a)
    }

    fn with_precision(&self, s: u32) -> Self {
        Zmod::new(self.p, s)
    }

    fn reduce_elem(&self, a: &BigUint) -> BigUint {
        a % &self.modulus
    }

    fn exact_div_p(&self, a: &BigUint) -> Result<BigUint> {
        let p = BigUint::from(self.p);
        if !(a % &p).is_zero() {
            return Err(Error::Mismatch(format!(
                "exact division by {} of a value with valuation 0",
                self.p
            )));
        }
        Ok(a / &p % &self.modulus)
    }

    fn sigma_is_identity(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_small_cases() {
        let r = Zmod::new(5, 2);
        assert_eq!(r.mul(&r.from_i64(24), &r.from_i64(24)), r.one());
        let r = Zmod::new(3, 2);
        assert_eq!(r.add(&r.from_i64(4), &r.from_i64(5)), r.zero());
        let r = Zmod::new(7, 1);
        assert_eq!(r.mul(&r.from_i64(3), &r.from_i64(5)), r.one());
    }

    #[test]
    fn hensel_inverse_matches_euclid_oracle() {
        // independent oracle: extended Euclid over big integers
        fn euclid_inv(a: &BigUint, m: &BigUint) -> BigUint {
            use num_bigint::BigInt;
            use num_integer::Integer;
            let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
            assert!(e.gcd.is_one());
            let m = BigInt::from(m.clone());
            ((e.x % &m + &m) % &m).to_biguint().unwrap()
        }
        let r = Zmod::new(5, 3);
        let inv2 = r.inverse(&r.from_i64(2)).unwrap();
        assert_eq!(inv2, BigUint::from(63u8));
        assert_eq!(inv2, euclid_inv(&r.from_i64(2), r.modulus()));
        for p in [3u64, 5, 7, 11] {
            for s in [1u32, 2, 3, 5] {
                let r = Zmod::new(p, s);
                for a in 1..30i64 {
                    let a = r.from_i64(a);
                    if r.is_unit(&a) {
                        let inv = r.inverse(&a).unwrap();
                        assert_eq!(r.mul(&a, &inv), r.one());
                        assert_eq!(inv, euclid_inv(&a, r.modulus()));
                    }
                }
            }
        }
        let r = Zmod::new(3, 1);
        assert_eq!(r.inverse(&r.from_i64(2)).unwrap(), r.from_i64(2));
    }

    #[test]
    fn non_unit_inverse_reports_valuation() {
        let r = Zmod::new(3, 2);
        match r.inverse(&r.from_i64(3)) {
            Err(Error::NotAUnit { valuation }) => assert_eq!(valuation, 1),
            other => panic!("expected NotAUnit, got {other:?}"),
        }
    }

    #[test]
    fn p_power_over_factorial_cases() {
        let r = Zmod::new(3, 2);
        assert_eq!(r.p_power_over_factorial(0).unwrap(), r.one());
        // 3^2/2! = 9/2 has valuation 2 >= s, hence 0 mod 9
        assert_eq!(r.p_power_over_factorial(2).unwrap(), r.zero());
        let r = Zmod::new(5, 3);
        assert_eq!(r.p_power_over_factorial(1).unwrap(), r.from_i64(5));
        assert!(Zmod::new(2, 3).p_power_over_factorial(1).is_err());
    }

    #[test]
    fn p_power_over_factorial_valuation_bound() {
        // ord_p(p^r/r!) >= r - r/(p-1), checked at high precision so the
        // cap does not mask the true valuation
        for p in [3u64, 5, 7] {
            let s = 60;
            let r = Zmod::new(p, s);
            for k in 0..=50u64 {
                let v = r.val(&r.p_power_over_factorial(k).unwrap());
                let bound = (k as f64) * ((p - 2) as f64) / ((p - 1) as f64);
                assert!(
                    (v as f64) >= bound.floor(),
                    "p={p} r={k}: val {v} < bound {bound}"
                );
            }
        }
    }

    #[test]
    fn big_modulus_no_packing() {
        let r = Zmod::new(7, 30);
        assert!(r.packing().is_none());
        let a = r.from_i64(123456789);
        let inv = r.inverse(&a).unwrap();
        assert_eq!(r.mul(&a, &inv), r.one());
    }
}
