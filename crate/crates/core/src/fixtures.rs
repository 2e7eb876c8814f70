//! Bundled example polynomials used by the test suites and the CLI.
//!
//! Each builder instantiates the same underlying integer data over a
//! caller-supplied coefficient ring, so fixtures can be materialized at
//! any (p, s, cap).

use crate::laurent::{ExponentVector, LaurentPoly};
use crate::ring::{IntPolyRing, Ring, SeriesRing, Zmod};

/// Terms as (exponents, coefficients of the t-polynomial, low degree first).
pub type TermData = (Vec<i64>, Vec<i64>);

/// y^2 - x(x-1)(x-t) = y^2 - x^3 + (1+t)x^2 - tx, the elliptic pencil
/// with hypergeometric periods.
pub fn legendre_terms() -> Vec<TermData> {
    vec![
        (vec![0, 2], vec![1]),
        (vec![3, 0], vec![-1]),
        (vec![2, 0], vec![1, 1]),
        (vec![1, 0], vec![0, -1]),
    ]
}

/// y^2 + t x^3 + x y + x, a degenerating cubic pencil whose β matrices
/// have fully explicit closed forms.
pub fn cubic_family_terms() -> Vec<TermData> {
    vec![
        (vec![0, 2], vec![1]),
        (vec![3, 0], vec![0, 1]),
        (vec![1, 1], vec![1]),
        (vec![1, 0], vec![1]),
    ]
}

/// (1+x)(1+y) = 1 + x + y + xy: every lattice point of the square is a
/// vertex and every coefficient is a unit.
pub fn hypercube_terms() -> Vec<TermData> {
    vec![
        (vec![0, 0], vec![1]),
        (vec![1, 0], vec![1]),
        (vec![0, 1], vec![1]),
        (vec![1, 1], vec![1]),
    ]
}

/// Hypercube with a series unit (1+t) at the origin vertex.
pub fn one_vertex_terms() -> Vec<TermData> {
    vec![
        (vec![0, 0], vec![1, 1]),
        (vec![1, 0], vec![1]),
        (vec![0, 1], vec![1]),
        (vec![1, 1], vec![1]),
    ]
}

/// 1 + 2x + 3y + xy over the unit square.
pub fn skew_square_terms() -> Vec<TermData> {
    vec![
        (vec![0, 0], vec![1]),
        (vec![1, 0], vec![2]),
        (vec![0, 1], vec![3]),
        (vec![1, 1], vec![1]),
    ]
}

/// 1 - x in one variable.
pub fn segment_terms() -> Vec<TermData> {
    vec![(vec![0], vec![1]), (vec![1], vec![-1])]
}

/// Instantiate term data over a series ring (t stays symbolic).
pub fn series_poly(ring: &SeriesRing, terms: &[TermData]) -> LaurentPoly<SeriesRing> {
    let dim = terms[0].0.len();
    LaurentPoly::from_terms(
        ring.clone(),
        dim,
        terms
            .iter()
            .map(|(e, c)| (ExponentVector::from(e.clone()), ring.from_coeffs(c))),
    )
}

/// Instantiate term data over Z/p^s, evaluating t at `t0`.
pub fn scalar_poly(ring: &Zmod, terms: &[TermData], t0: i64) -> LaurentPoly<Zmod> {
    let dim = terms[0].0.len();
    LaurentPoly::from_terms(
        ring.clone(),
        dim,
        terms.iter().map(|(e, c)| {
            let mut acc = 0i128;
            let mut pw = 1i128;
            for &coef in c {
                acc += coef as i128 * pw;
                pw *= t0 as i128;
            }
            (
                ExponentVector::from(e.clone()),
                ring.from_i64(i64::try_from(acc).expect("fixture coefficient fits i64")),
            )
        }),
    )
}

/// Instantiate term data over exact Z[t].
pub fn int_poly(ring: &IntPolyRing, terms: &[TermData]) -> LaurentPoly<IntPolyRing> {
    let dim = terms[0].0.len();
    LaurentPoly::from_terms(
        ring.clone(),
        dim,
        terms
            .iter()
            .map(|(e, c)| (ExponentVector::from(e.clone()), ring.from_coeffs(c))),
    )
}

pub fn legendre_series(ring: &SeriesRing) -> LaurentPoly<SeriesRing> {
    series_poly(ring, &legendre_terms())
}

pub fn legendre_at(ring: &Zmod, z0: i64) -> LaurentPoly<Zmod> {
    scalar_poly(ring, &legendre_terms(), z0)
}

pub fn cubic_family(ring: &SeriesRing) -> LaurentPoly<SeriesRing> {
    series_poly(ring, &cubic_family_terms())
}

pub fn hypercube<R: Ring>(ring: &R) -> LaurentPoly<R> {
    let one = ring.one();
    LaurentPoly::from_terms(
        ring.clone(),
        2,
        hypercube_terms()
            .iter()
            .map(|(e, _)| (ExponentVector::from(e.clone()), one.clone())),
    )
}

pub fn hypercube_with_vertex_series(ring: &SeriesRing) -> LaurentPoly<SeriesRing> {
    series_poly(ring, &one_vertex_terms())
}

pub fn segment<R: Ring>(ring: &R) -> LaurentPoly<R> {
    LaurentPoly::from_terms(
        ring.clone(),
        1,
        [
            (ExponentVector::from(vec![0i64]), ring.one()),
            (ExponentVector::from(vec![1i64]), ring.neg(&ring.one())),
        ],
    )
}

/// Deterministic sparse 2-variable polynomial with invertible interior
/// Hasse-Witt matrix. The seed walks a small congruential generator; the
/// first candidate with nonempty interior and unit Hasse-Witt wins.
pub fn random_sparse_unit_hw(ring: &Zmod, seed: u64) -> LaurentPoly<Zmod> {
    use crate::crystal::hasse_witt;
    use crate::polytope::NewtonPolytope;

    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    loop {
        // support: the Legendre-style triangle corners plus random points
        let mut terms: Vec<(ExponentVector, <Zmod as Ring>::Elem)> = vec![
            (ExponentVector::from(vec![0i64, 2]), ring.from_i64(1 + (next() % 9) as i64)),
            (ExponentVector::from(vec![3i64, 0]), ring.from_i64(1 + (next() % 9) as i64)),
            (ExponentVector::from(vec![1i64, 0]), ring.from_i64(1 + (next() % 9) as i64)),
        ];
        for _ in 0..(next() % 3) {
            let e = ExponentVector::from(vec![(next() % 3) as i64, (next() % 2) as i64]);
            terms.push((e, ring.from_i64((next() % 10) as i64)));
        }
        let f = LaurentPoly::from_terms(ring.clone(), 2, terms);
        let Ok(polytope) = NewtonPolytope::from_support(&f.support()) else {
            continue;
        };
        if polytope.interior_lattice_points().is_empty() {
            continue;
        }
        let region = polytope.interior_region();
        if let Ok(hw) = hasse_witt(&f, &region) {
            if hw.invertible_mod_p {
                return f;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_specialization_matches_series_constant_term() {
        let zr = Zmod::new(5, 2);
        let f = legendre_at(&zr, 2);
        // f(z=2) = y^2 - x^3 + 3x^2 - 2x
        assert_eq!(
            f.coefficient(&ExponentVector::from(vec![2i64, 0])),
            zr.from_i64(3)
        );
        assert_eq!(
            f.coefficient(&ExponentVector::from(vec![1i64, 0])),
            zr.from_i64(-2)
        );
    }

    #[test]
    fn random_sparse_is_deterministic_and_unit() {
        let ring = Zmod::new(5, 2);
        let a = random_sparse_unit_hw(&ring, 7);
        let b = random_sparse_unit_hw(&ring, 7);
        assert_eq!(a, b);
    }
}
