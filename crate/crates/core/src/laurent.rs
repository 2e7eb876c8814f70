//! Sparse multivariate Laurent polynomials over the coefficient rings.
//!
//! Multiplication is the designated optimization point: products and the
//! incremental power walker route through a dense word-packed kernel when
//! the ring supports it (modulus below 2^20), and fall back to generic
//! sparse accumulation over big integers otherwise. Both paths are exact.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ring::{Packing, Ring};

/// An integer exponent vector; lexicographic order is the canonical one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub SmallVec<[i64; 4]>);

impl ExponentVector {
    pub fn new(v: impl Into<SmallVec<[i64; 4]>>) -> Self {
        ExponentVector(v.into())
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector(SmallVec::from_elem(0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_divisible_by(&self, c: i64) -> bool {
        self.0.iter().all(|a| a % c == 0)
    }

    pub fn div_exact(&self, c: i64) -> Self {
        ExponentVector(self.0.iter().map(|a| a / c).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(SmallVec::from_vec(v))
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        ExponentVector(SmallVec::from_slice(v))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

/// Sparse Laurent polynomial: a finite map from exponent vectors to
/// nonzero ring elements. Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct LaurentPoly<R: Ring> {
    ring: R,
    dim: usize,
    terms: HashMap<ExponentVector, R::Elem>,
}

impl<R: Ring> PartialEq for LaurentPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.dim == other.dim && self.terms == other.terms
    }
}

impl<R: Ring> LaurentPoly<R> {
    pub fn zero(ring: R, dim: usize) -> Self {
        LaurentPoly {
            ring,
            dim,
            terms: HashMap::new(),
        }
    }

    pub fn one(ring: R, dim: usize) -> Self {
        let mut p = LaurentPoly::zero(ring, dim);
        let one = p.ring.one();
        p.insert_add(ExponentVector::zero(dim), one);
        p
    }

    pub fn monomial(ring: R, e: ExponentVector, c: R::Elem) -> Self {
        let mut p = LaurentPoly::zero(ring, e.dim());
        p.insert_add(e, c);
        p
    }

    pub fn from_terms(
        ring: R,
        dim: usize,
        terms: impl IntoIterator<Item = (ExponentVector, R::Elem)>,
    ) -> Self {
        let mut p = LaurentPoly::zero(ring, dim);
        for (e, c) in terms {
            assert_eq!(e.dim(), dim, "exponent dimension mismatch");
            p.insert_add(e, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c` at exponent `e`, keeping the no-zero-coefficients invariant.
    pub fn insert_add(&mut self, e: ExponentVector, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let s = self.ring.add(o.get(), &c);
                if self.ring.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Stored coefficient, or zero.
    pub fn coefficient(&self, e: &ExponentVector) -> R::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        let mut s: Vec<_> = self.terms.keys().cloned().collect();
        s.sort();
        s
    }

    /// Terms in canonical (lexicographic) order.
    pub fn sorted_terms(&self) -> Vec<(ExponentVector, R::Elem)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&ExponentVector, &R::Elem)> {
        self.terms.iter()
    }

    pub fn map_coeffs<F: Fn(&R::Elem) -> R::Elem>(&self, f: F) -> Self {
        let mut out = LaurentPoly::zero(self.ring.clone(), self.dim);
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), f(c));
        }
        out
    }

    /// Apply the ring's Frobenius lift to every coefficient.
    pub fn coeff_frobenius(&self) -> Self {
        let ring = self.ring.clone();
        self.map_coeffs(|c| ring.frobenius(c))
    }

    /// Substitute x_i -> x_i^k for all i.
    pub fn stretch_exponents(&self, k: i64) -> Self {
        let mut out = LaurentPoly::zero(self.ring.clone(), self.dim);
        for (e, c) in &self.terms {
            out.insert_add(e.scale(k), c.clone());
        }
        out
    }

    pub fn add_poly(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub_poly(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(e.clone(), self.ring.neg(c));
        }
        Ok(out)
    }

    pub fn scale_coeff(&self, c: &R::Elem) -> Self {
        let ring = self.ring.clone();
        self.map_coeffs(|x| ring.mul(x, c))
    }

    /// Exact product, reduced in the coefficient ring.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(LaurentPoly::zero(self.ring.clone(), self.dim));
        }
        if let Some(pk) = self.ring.packing() {
            if let Some(out) = self.try_multiply_dense(other, pk) {
                return Ok(out);
            }
        }
        Ok(self.multiply_sparse(other))
    }

    fn multiply_sparse(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero(self.ring.clone(), self.dim);
        out.terms.reserve(self.terms.len().saturating_mul(other.terms.len()).min(1 << 16));
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                out.insert_add(ea.add(eb), self.ring.mul(ca, cb));
            }
        }
        out
    }

    fn try_multiply_dense(&self, other: &Self, pk: Packing) -> Option<Self> {
        let box_a = BoundingBox::of(self)?;
        let box_b = BoundingBox::of(other)?;
        let out_box = box_a.minkowski(&box_b);
        let cells = out_box.cells()?;
        if cells.saturating_mul(pk.width) > (1 << 26) {
            return None;
        }
        // overflow margin for u64 accumulation
        let per_word = (self.terms.len().min(other.terms.len()) as u128) * pk.width as u128;
        let sq = (pk.modulus as u128 - 1) * (pk.modulus as u128 - 1);
        if sq.checked_mul(per_word)? > u64::MAX as u128 {
            return None;
        }

        let a = PackedTerms::pack(self, &pk);
        let b = PackedTerms::pack(other, &pk);
        let mut out = vec![0u64; cells * pk.width];
        let strides = out_box.strides();

        for ta in 0..a.offsets.len() {
            let off_a = linear_offset(&a.exps[ta], &box_a.lo, &strides);
            let wa = a.words(ta);
            for tb in 0..b.offsets.len() {
                let off_b = linear_offset(&b.exps[tb], &box_b.lo, &strides);
                let base = (off_a + off_b) * pk.width;
                let wb = b.words(tb);
                if pk.width == 1 {
                    out[base] += wa[0] * wb[0];
                } else {
                    for (i, &x) in wa.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        let lim = (pk.width - i).min(wb.len());
                        let dst = &mut out[base + i..base + i + lim];
                        for (d, &y) in dst.iter_mut().zip(&wb[..lim]) {
                            *d += x * y;
                        }
                    }
                }
            }
        }

        let mut result = LaurentPoly::zero(self.ring.clone(), self.dim);
        let mut coords = out_box.lo.clone();
        for cell in 0..cells {
            let words = &mut out[cell * pk.width..(cell + 1) * pk.width];
            let mut nonzero = false;
            for w in words.iter_mut() {
                *w %= pk.modulus;
                nonzero |= *w != 0;
            }
            if nonzero {
                let e = ExponentVector(SmallVec::from_slice(&coords));
                result.terms.insert(e, self.ring.unpack(words));
            }
            out_box.advance(&mut coords);
        }
        Some(result)
    }

    /// f^e by binary powering, with modular reduction after every product.
    pub fn power(&self, e: u64) -> Result<Self> {
        let mut result = LaurentPoly::one(self.ring.clone(), self.dim);
        if e == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut k = e;
        loop {
            if k & 1 == 1 {
                result = result.multiply(&base)?;
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.multiply(&base)?;
        }
        Ok(result)
    }

    /// [f_0, f_1, ..., f_n] with f_0 = f and f_i = x_i ∂f/∂x_i.
    pub fn log_derivative_numerators(&self) -> Vec<Self> {
        let mut out = vec![self.clone()];
        for i in 0..self.dim {
            let mut fi = LaurentPoly::zero(self.ring.clone(), self.dim);
            for (e, c) in &self.terms {
                let scaled = self.ring.mul(c, &self.ring.from_i64(e.0[i]));
                fi.insert_add(e.clone(), scaled);
            }
            out.push(fi);
        }
        out
    }

    /// Canonical text form: terms sorted lexicographically.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .iter()
            .map(|(e, c)| {
                let cs = self.ring.format_elem(c);
                let cs = if cs.contains('+') || cs.contains(' ') {
                    format!("({cs})")
                } else {
                    cs
                };
                if e.0.iter().all(|&x| x == 0) {
                    cs
                } else {
                    format!("{cs}*x^{e}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Mismatch(format!(
                "polynomial dimensions differ: {} vs {}",
                self.dim, other.dim
            )));
        }
        if self.ring != other.ring {
            return Err(Error::Mismatch("polynomial coefficient rings differ".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct BoundingBox {
    lo: SmallVec<[i64; 4]>,
    hi: SmallVec<[i64; 4]>,
}

impl BoundingBox {
    fn of<R: Ring>(p: &LaurentPoly<R>) -> Option<BoundingBox> {
        let mut it = p.terms.keys();
        let first = it.next()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for e in it {
            for i in 0..e.dim() {
                lo[i] = lo[i].min(e.0[i]);
                hi[i] = hi[i].max(e.0[i]);
            }
        }
        Some(BoundingBox { lo, hi })
    }

    fn minkowski(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a + b).collect(),
        }
    }

    fn extents(&self) -> SmallVec<[usize; 4]> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .collect()
    }

    fn cells(&self) -> Option<usize> {
        let mut acc: usize = 1;
        for e in self.extents() {
            acc = acc.checked_mul(e)?;
        }
        Some(acc)
    }

    /// Row-major strides, last coordinate contiguous.
    fn strides(&self) -> SmallVec<[usize; 4]> {
        let ext = self.extents();
        let mut strides = SmallVec::from_elem(0usize, ext.len());
        let mut acc = 1usize;
        for i in (0..ext.len()).rev() {
            strides[i] = acc;
            acc *= ext[i];
        }
        strides
    }

    /// Advance row-major coordinates in place.
    fn advance(&self, coords: &mut SmallVec<[i64; 4]>) {
        for i in (0..coords.len()).rev() {
            coords[i] += 1;
            if coords[i] <= self.hi[i] {
                return;
            }
            coords[i] = self.lo[i];
        }
    }
}

fn linear_offset(e: &ExponentVector, lo: &[i64], strides: &[usize]) -> usize {
    let mut acc = 0usize;
    for i in 0..e.dim() {
        acc += ((e.0[i] - lo[i]) as usize) * strides[i];
    }
    acc
}

/// Visit the contiguous memory rows of a sub-box of `full` (the last
/// coordinate is the contiguous one), as (cell start, cell count) pairs.
fn for_each_row(
    sub: &BoundingBox,
    full: &BoundingBox,
    strides: &[usize],
    mut visit: impl FnMut(usize, usize),
) {
    let dim = full.lo.len();
    let row_len = (sub.hi[dim - 1] - sub.lo[dim - 1] + 1) as usize;
    let mut prefix = sub.lo.clone();
    loop {
        let row_start = linear_offset(&ExponentVector(prefix.clone()), &full.lo, strides);
        visit(row_start, row_len);
        let mut i = dim.wrapping_sub(2);
        loop {
            if i == usize::MAX {
                return;
            }
            prefix[i] += 1;
            if prefix[i] <= sub.hi[i] {
                break;
            }
            prefix[i] = sub.lo[i];
            i = i.wrapping_sub(1);
        }
    }
}

struct PackedTerms {
    exps: Vec<ExponentVector>,
    offsets: Vec<(usize, usize)>, // (start, significant length) into words
    words: Vec<u64>,
}

impl PackedTerms {
    fn pack<R: Ring>(p: &LaurentPoly<R>, pk: &Packing) -> PackedTerms {
        let mut exps = Vec::with_capacity(p.terms.len());
        let mut offsets = Vec::with_capacity(p.terms.len());
        let mut words = Vec::with_capacity(p.terms.len() * pk.width);
        let mut buf = vec![0u64; pk.width];
        for (e, c) in &p.terms {
            p.ring.pack_into(c, &mut buf);
            let len = buf.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
            let start = words.len();
            words.extend_from_slice(&buf[..len]);
            exps.push(e.clone());
            offsets.push((start, len));
        }
        PackedTerms { exps, offsets, words }
    }

    fn words(&self, t: usize) -> &[u64] {
        let (start, len) = self.offsets[t];
        &self.words[start..start + len]
    }
}

/// Incremental computation of f^k for increasing k, holding only the
/// running power. Serves the β-matrix builders, which need coefficients
/// of f^(m-1) at several m without storing intermediate powers.
pub struct PowerWalker<R: Ring> {
    ring: R,
    k: u64,
    max_exp: u64,
    repr: WalkerRepr<R>,
}

enum WalkerRepr<R: Ring> {
    Dense(DenseWalker<R>),
    Sparse {
        f: LaurentPoly<R>,
        cur: LaurentPoly<R>,
    },
}

struct DenseWalker<R: Ring> {
    ring: R,
    pk: Packing,
    full: BoundingBox,
    strides: SmallVec<[usize; 4]>,
    f_terms: PackedTerms,
    f_deltas: Vec<i64>,
    f_box: BoundingBox,
    cur: Vec<u64>,
    nxt: Vec<u64>,
    support: BoundingBox,
}

impl<R: Ring> PowerWalker<R> {
    /// Prepare to walk powers of `f` up to exponent `max_exp`.
    pub fn new(f: &LaurentPoly<R>, max_exp: u64) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::Mismatch("power walker over the zero polynomial".into()));
        }
        let ring = f.ring().clone();
        if let Some(pk) = ring.packing() {
            if let Some(dense) = DenseWalker::new(f, max_exp, pk) {
                return Ok(PowerWalker {
                    ring,
                    k: 0,
                    max_exp,
                    repr: WalkerRepr::Dense(dense),
                });
            }
        }
        Ok(PowerWalker {
            ring: ring.clone(),
            k: 0,
            max_exp,
            repr: WalkerRepr::Sparse {
                f: f.clone(),
                cur: LaurentPoly::one(ring, f.dim()),
            },
        })
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    /// Advance the running power to f^k (k must not decrease).
    pub fn advance_to(&mut self, k: u64) -> Result<()> {
        assert!(k >= self.k, "power walker cannot rewind");
        assert!(k <= self.max_exp, "power walker advanced past its declared bound");
        while self.k < k {
            match &mut self.repr {
                WalkerRepr::Dense(d) => d.step(),
                WalkerRepr::Sparse { f, cur } => {
                    *cur = cur.multiply(f)?;
                }
            }
            self.k += 1;
        }
        Ok(())
    }

    /// Coefficient of x^e in the current power.
    pub fn coeff(&self, e: &ExponentVector) -> R::Elem {
        match &self.repr {
            WalkerRepr::Dense(d) => d.coeff(e),
            WalkerRepr::Sparse { cur, .. } => cur.coefficient(e),
        }
    }
}

impl<R: Ring> DenseWalker<R> {
    fn new(f: &LaurentPoly<R>, max_exp: u64, pk: Packing) -> Option<DenseWalker<R>> {
        let fb = BoundingBox::of(f)?;
        let m = max_exp as i64;
        let full = BoundingBox {
            lo: fb.lo.iter().map(|&l| (l * m).min(0)).collect(),
            hi: fb.hi.iter().map(|&h| (h * m).max(0)).collect(),
        };
        let cells = full.cells()?;
        let words = cells.checked_mul(pk.width)?;
        if words > (1 << 26) {
            return None;
        }
        // per-step accumulation bound: |f| terms, width-long convolutions
        let per_word = (f.terms.len() as u128) * pk.width as u128;
        let sq = (pk.modulus as u128 - 1) * (pk.modulus as u128 - 1);
        if sq.checked_mul(per_word)? > u64::MAX as u128 {
            return None;
        }
        let strides = full.strides();
        let f_terms = PackedTerms::pack(f, &pk);
        let f_deltas = f_terms
            .exps
            .iter()
            .map(|e| {
                e.0.iter()
                    .zip(&strides)
                    .map(|(&c, &s)| c * s as i64)
                    .sum::<i64>()
            })
            .collect();
        let mut cur = vec![0u64; words];
        let origin = ExponentVector::zero(f.dim());
        let base = linear_offset(&origin, &full.lo, &strides) * pk.width;
        let mut one = vec![0u64; pk.width];
        f.ring().pack_into(&f.ring().one(), &mut one);
        cur[base..base + pk.width].copy_from_slice(&one);
        let support = BoundingBox {
            lo: SmallVec::from_elem(0, f.dim()),
            hi: SmallVec::from_elem(0, f.dim()),
        };
        Some(DenseWalker {
            ring: f.ring().clone(),
            pk,
            full,
            strides,
            f_terms,
            f_deltas,
            f_box: fb,
            cur,
            nxt: vec![0u64; words],
            support,
        })
    }

    fn step(&mut self) {
        let w = self.pk.width;
        let dim = self.full.lo.len();
        let grown = BoundingBox {
            lo: (0..dim)
                .map(|d| (self.support.lo[d] + self.f_box.lo[d]).max(self.full.lo[d]))
                .collect(),
            hi: (0..dim)
                .map(|d| (self.support.hi[d] + self.f_box.hi[d]).min(self.full.hi[d]))
                .collect(),
        };
        // zero exactly the rows the accumulation can write
        for_each_row(&grown, &self.full, &self.strides, |row_start, row_len| {
            self.nxt[row_start * w..(row_start + row_len) * w].fill(0);
        });

        let cur = &self.cur;
        let nxt = &mut self.nxt;
        let terms = &self.f_terms;
        let deltas = &self.f_deltas;
        for_each_row(&self.support, &self.full, &self.strides, |row_start, row_len| {
            for t in 0..terms.exps.len() {
                let wt = terms.words(t);
                let dst_start = (row_start as i64 + deltas[t]) as usize;
                if w == 1 {
                    let c = wt[0];
                    let src = &cur[row_start..row_start + row_len];
                    let dst = &mut nxt[dst_start..dst_start + row_len];
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d += s * c;
                    }
                } else {
                    for cell in 0..row_len {
                        let sbase = (row_start + cell) * w;
                        let dbase = (dst_start + cell) * w;
                        for i in 0..w {
                            let x = cur[sbase + i];
                            if x == 0 {
                                continue;
                            }
                            let lim = (w - i).min(wt.len());
                            for j in 0..lim {
                                nxt[dbase + i + j] += x * wt[j];
                            }
                        }
                    }
                }
            }
        });

        self.support = grown;
        std::mem::swap(&mut self.cur, &mut self.nxt);
        let m = self.pk.modulus;
        let cur = &mut self.cur;
        for_each_row(&self.support, &self.full, &self.strides, |row_start, row_len| {
            for word in &mut cur[row_start * w..(row_start + row_len) * w] {
                *word %= m;
            }
        });
    }

    fn coeff(&self, e: &ExponentVector) -> R::Elem {
        for i in 0..e.dim() {
            if e.0[i] < self.full.lo[i] || e.0[i] > self.full.hi[i] {
                return self.ring.zero();
            }
        }
        let base = linear_offset(e, &self.full.lo, &self.strides) * self.pk.width;
        self.ring.unpack(&self.cur[base..base + self.pk.width])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{SeriesRing, Zmod};

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn poly(ring: &Zmod, terms: &[(&[i64], i64)]) -> LaurentPoly<Zmod> {
        LaurentPoly::from_terms(
            ring.clone(),
            terms[0].0.len(),
            terms.iter().map(|(e, c)| (ev(e), ring.from_i64(*c))),
        )
    }

    #[test]
    fn multiply_basic() {
        let r = Zmod::new(5, 2);
        let a = poly(&r, &[(&[0], 1), (&[1], -1)]);
        let b = poly(&r, &[(&[0], 1), (&[1], 1)]);
        let prod = a.multiply(&b).unwrap();
        assert_eq!(prod, poly(&r, &[(&[0], 1), (&[2], -1)]));
        let z = LaurentPoly::zero(r.clone(), 1);
        assert!(a.multiply(&z).unwrap().is_zero());
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        // big modulus forces the sparse path; small modulus uses dense
        let small = Zmod::new(7, 2);
        let big = Zmod::new(7, 30);
        let mk = |r: &Zmod| {
            poly(
                r,
                &[(&[0, 2], 1), (&[3, 0], 2), (&[1, 1], 1), (&[1, 0], 1), (&[-1, -1], 3)],
            )
        };
        let a = mk(&small);
        let b = mk(&big);
        let pa = a.multiply(&a).unwrap();
        let pb = b.multiply(&b).unwrap();
        assert!(small.packing().is_some() && big.packing().is_none());
        for (e, c) in pa.sorted_terms() {
            assert_eq!(c, small.reduce_big(&pb.coefficient(&e)));
        }
        assert_eq!(pa.term_count(), pb.term_count());
    }

    #[test]
    fn power_binary_matches_naive() {
        let r = Zmod::new(3, 2);
        let f = poly(&r, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]);
        let mut naive = LaurentPoly::one(r.clone(), 2);
        for e in 0..=12u64 {
            assert_eq!(f.power(e).unwrap(), naive, "exponent {e}");
            naive = naive.multiply(&f).unwrap();
        }
        assert_eq!(
            f.power(2).unwrap().coefficient(&ev(&[1, 1])),
            r.from_i64(4)
        );
    }

    #[test]
    fn binomial_coefficient_example() {
        let r = Zmod::new(101, 1);
        let f = poly(&r, &[(&[0], 1), (&[1], -1)]);
        assert_eq!(f.power(4).unwrap().coefficient(&ev(&[2])), r.from_i64(6));
        assert_eq!(f.coefficient(&ev(&[1])), r.from_i64(-1));
        assert_eq!(f.coefficient(&ev(&[7])), r.zero());
    }

    #[test]
    fn power_walker_matches_power() {
        let r = Zmod::new(5, 2);
        let f = poly(&r, &[(&[0, 2], 1), (&[3, 0], 4), (&[1, 1], 1), (&[1, 0], 1)]);
        let mut walker = PowerWalker::new(&f, 9).unwrap();
        for k in [0u64, 1, 4, 9] {
            walker.advance_to(k).unwrap();
            let direct = f.power(k).unwrap();
            for (e, c) in direct.sorted_terms() {
                assert_eq!(walker.coeff(&e), c, "k={k} e={e}");
            }
            // spot-check absent coefficients too
            assert!(r.is_zero(&walker.coeff(&ev(&[100, 100]))));
        }
    }

    #[test]
    fn power_walker_series_coefficients() {
        let r = SeriesRing::new(3, 2, 8);
        let t = r.monomial(1, 1);
        let f = LaurentPoly::from_terms(
            r.clone(),
            2,
            [
                (ev(&[0, 2]), r.one()),
                (ev(&[3, 0]), t),
                (ev(&[1, 1]), r.one()),
                (ev(&[1, 0]), r.one()),
            ],
        );
        let mut w = PowerWalker::new(&f, 6).unwrap();
        w.advance_to(4).unwrap();
        let direct = f.power(4).unwrap();
        for (e, c) in direct.sorted_terms() {
            assert_eq!(w.coeff(&e), c);
        }
    }

    #[test]
    fn log_derivative_numerators_rules() {
        let r = Zmod::new(7, 2);
        let f = poly(&r, &[(&[0], 1), (&[1], -1)]);
        let fs = f.log_derivative_numerators();
        assert_eq!(fs[1], poly(&r, &[(&[1], -1)]));
        let c = LaurentPoly::one(r.clone(), 2);
        assert!(c.log_derivative_numerators()[1].is_zero());
        assert!(c.log_derivative_numerators()[2].is_zero());
    }

    #[test]
    fn exponent_weighted_coefficient_identity() {
        // coefficient of x^e in f_i equals e_i times the one in f
        let r = Zmod::new(5, 3);
        let f = poly(&r, &[(&[2, 1], 3), (&[0, 4], 1), (&[-1, 2], 2)]);
        let fs = f.log_derivative_numerators();
        for (e, c) in f.sorted_terms() {
            for i in 0..2 {
                assert_eq!(
                    fs[i + 1].coefficient(&e),
                    r.mul(&c, &r.from_i64(e.0[i]))
                );
            }
        }
    }

    #[test]
    fn canonical_string_sorted() {
        let r = Zmod::new(3, 1);
        let f = poly(&r, &[(&[1, 0], 2), (&[0, 0], 1)]);
        assert_eq!(f.to_canonical_string(), "1 + 2*x^(1,0)");
    }
}
