//! Square matrices over a coefficient ring, with unit-pivot Gaussian
//! inversion and row labels by lattice points.

use super::{Derivation, PadicRing, Ring};
use crate::error::{Error, Result};
use crate::laurent::ExponentVector;

/// A square matrix over `R`, optionally labelled by lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    size: usize,
    entries: Vec<R::Elem>,
    labels: Option<Vec<ExponentVector>>,
}

impl<R: Ring> Matrix<R> {
    pub fn new(ring: R, size: usize, entries: Vec<R::Elem>) -> Self {
        assert_eq!(entries.len(), size * size);
        Matrix {
            ring,
            size,
            entries,
            labels: None,
        }
    }

    pub fn identity(ring: R, size: usize) -> Self {
        let mut entries = vec![ring.zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = ring.one();
        }
        Matrix::new(ring, size, entries)
    }

    pub fn with_labels(mut self, labels: Vec<ExponentVector>) -> Self {
        assert_eq!(labels.len(), self.size);
        self.labels = Some(labels);
        self
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[ExponentVector]> {
        self.labels.as_deref()
    }

    pub fn at(&self, i: usize, j: usize) -> &R::Elem {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.entries[i * self.size + j] = v;
    }

    pub fn map<F: Fn(&R::Elem) -> R::Elem>(&self, f: F) -> Self {
        Matrix {
            ring: self.ring.clone(),
            size: self.size,
            entries: self.entries.iter().map(f).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Entrywise Frobenius lift.
    pub fn sigma(&self) -> Self {
        let ring = self.ring.clone();
        self.map(|e| ring.frobenius(e))
    }

    /// Entrywise derivation.
    pub fn derive(&self, kind: Derivation) -> Self {
        let ring = self.ring.clone();
        self.map(|e| ring.derive(e, kind))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.ring.zero();
                for k in 0..n {
                    let t = self.ring.mul(self.at(i, k), other.at(k, j));
                    acc = self.ring.add(&acc, &t);
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            ring: self.ring.clone(),
            size: n,
            entries,
            labels: self.labels.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        Ok(Matrix {
            ring: self.ring.clone(),
            size: self.size,
            entries,
            labels: self.labels.clone(),
        })
    }

    pub fn trace(&self) -> R::Elem {
        let mut acc = self.ring.zero();
        for i in 0..self.size {
            acc = self.ring.add(&acc, self.at(i, i));
        }
        acc
    }

    /// Row vector times matrix.
    pub fn row_mul(&self, row: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(row.len(), self.size);
        (0..self.size)
            .map(|j| {
                let mut acc = self.ring.zero();
                for i in 0..self.size {
                    acc = self.ring.add(&acc, &self.ring.mul(&row[i], self.at(i, j)));
                }
                acc
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn col_mul(&self, col: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(col.len(), self.size);
        (0..self.size)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.size {
                    acc = self.ring.add(&acc, &self.ring.mul(self.at(i, j), &col[j]));
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inversion restricted to unit pivots. Succeeds exactly
    /// when the matrix is invertible modulo (p, t); the failure payload
    /// carries the rank of the mod-p reduction.
    pub fn invert(&self) -> Result<Self> {
        let n = self.size;
        let ring = &self.ring;
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(ring.clone(), n).entries;

        for col in 0..n {
            let pivot_row = (col..n).find(|&r| ring.is_unit(&a[r * n + col]));
            let Some(pr) = pivot_row else {
                return Err(Error::NotInvertibleModP {
                    rank: self.unit_rank(),
                    size: n,
                });
            };
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                    inv.swap(pr * n + j, col * n + j);
                }
            }
            let pinv = ring.inverse(&a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = ring.mul(&a[col * n + j], &pinv);
                inv[col * n + j] = ring.mul(&inv[col * n + j], &pinv);
            }
            for r in 0..n {
                if r == col || ring.is_zero(&a[r * n + col]) {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let t = ring.mul(&factor, &a[col * n + j]);
                    a[r * n + j] = ring.sub(&a[r * n + j], &t);
                    let t = ring.mul(&factor, &inv[col * n + j]);
                    inv[r * n + j] = ring.sub(&inv[r * n + j], &t);
                }
            }
        }

        let out = Matrix {
            ring: ring.clone(),
            size: n,
            entries: inv,
            labels: self.labels.clone(),
        };
        debug_assert!({
            let prod = self.mul(&out).unwrap();
            prod == Matrix::identity(ring.clone(), n).with_labels_opt(self.labels.clone())
        });
        Ok(out)
    }

    fn with_labels_opt(mut self, labels: Option<Vec<ExponentVector>>) -> Self {
        self.labels = labels;
        self
    }

    /// Rank of the matrix after replacing units by 1 and non-units by 0
    /// pivots, i.e. the rank of the reduction mod (p, t) over F_p.
    fn unit_rank(&self) -> usize {
        let n = self.size;
        let ring = &self.ring;
        let mut a = self.entries.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            let Some(pr) = (row..n).find(|&r| ring.is_unit(&a[r * n + col])) else {
                continue;
            };
            for j in 0..n {
                a.swap(pr * n + j, row * n + j);
            }
            let pinv = ring.inverse(&a[row * n + col]).expect("unit pivot");
            for j in 0..n {
                a[row * n + j] = ring.mul(&a[row * n + j], &pinv);
            }
            for r in 0..n {
                if r != row {
                    let factor = a[r * n + col].clone();
                    if !ring.is_zero(&factor) {
                        for j in 0..n {
                            let t = ring.mul(&factor, &a[row * n + j]);
                            a[r * n + j] = ring.sub(&a[r * n + j], &t);
                        }
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == n {
                break;
            }
        }
        rank
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.size != other.size {
            return Err(Error::Mismatch(
                "matrix operands over different rings or sizes".into(),
            ));
        }
        Ok(())
    }
}

impl<R: PadicRing> Matrix<R> {
    /// Reduce all entries into `target` (a lower-precision sibling ring).
    pub fn reduce_to(&self, target: &R) -> Matrix<R> {
        Matrix {
            ring: target.clone(),
            size: self.size,
            entries: self.entries.iter().map(|e| target.reduce_elem(e)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Minimum valuation over entries of `self - other`, seen at the given
    /// t-window (entries truncated to degrees < window when present).
    pub fn difference_valuation(&self, other: &Self, window: Option<usize>) -> Result<u32> {
        self.compatible(other)?;
        let mut min = self.ring.precision();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            let mut d = self.ring.sub(a, b);
            if let Some(w) = window {
                d = self.ring.truncate_t(&d, w);
            }
            min = min.min(self.ring.valuation(&d));
        }
        Ok(min)
    }
}
