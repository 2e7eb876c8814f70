//! β matrices, Hasse-Witt invertibility, the unit-root Frobenius matrix
//! Λ_σ and connection matrix N_δ, congruence verifiers, the semi-simple
//! block decomposition and the f_i/f fixed-row checks.
//!
//! Λ_σ at precision s is defined operationally as β_{p^s}·σ(β_{p^{s-1}})^{-1}
//! and N_δ as δ(β_{p^s})·β_{p^s}^{-1}; the limit objects are never formed.

use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly, PowerWalker};
use crate::polytope::{NewtonPolytope, Region};
use crate::report::{CheckReport, Status, Witness};
use crate::ring::{Derivation, Matrix, PadicRing, Ring};

/// β_m(μ): entries are coefficients of x^{mv-u} in f^{m-1} for u, v in μ_Z.
#[derive(Debug, Clone)]
pub struct BetaMatrix<R: PadicRing> {
    pub m: u64,
    pub region: String,
    pub matrix: Matrix<R>,
}

/// The unit-root Frobenius matrix at the ring's precision.
#[derive(Debug, Clone)]
pub struct FrobeniusMatrix<R: PadicRing> {
    pub precision: u32,
    pub region: String,
    pub matrix: Matrix<R>,
}

/// The connection matrix for a derivation at the ring's precision.
#[derive(Debug, Clone)]
pub struct ConnectionMatrix<R: PadicRing> {
    pub derivation: Derivation,
    pub precision: u32,
    pub region: String,
    pub matrix: Matrix<R>,
}

/// A Hasse-Witt matrix together with its invertibility mod (p, t).
#[derive(Debug, Clone)]
pub struct HasseWitt<R: PadicRing> {
    pub matrix: Matrix<R>,
    pub invertible_mod_p: bool,
}

/// β_m(μ) for each requested m, sharing one incremental power walk.
pub fn beta_family<R: Ring>(
    f: &LaurentPoly<R>,
    region: &Region,
    ms: &[u64],
) -> Result<Vec<Matrix<R>>> {
    if ms.iter().any(|&m| m == 0) {
        return Err(Error::Config("β_m requires m >= 1".into()));
    }
    let points = region.points();
    if points.is_empty() {
        return Err(Error::InvalidRegion("region has no lattice points".into()));
    }
    let mut order: Vec<usize> = (0..ms.len()).collect();
    order.sort_by_key(|&i| ms[i]);
    let max_m = ms[*order.last().unwrap()];
    let mut walker = PowerWalker::new(f, max_m - 1)?;
    let mut out: Vec<Option<Matrix<R>>> = vec![None; ms.len()];
    for i in order {
        let m = ms[i];
        walker.advance_to(m - 1)?;
        out[i] = Some(extract_beta(f.ring(), &mut walker, m, points));
    }
    Ok(out.into_iter().map(|m| m.unwrap()).collect())
}

fn extract_beta<R: Ring>(
    ring: &R,
    walker: &mut PowerWalker<R>,
    m: u64,
    points: &[ExponentVector],
) -> Matrix<R> {
    let h = points.len();
    let mut entries = Vec::with_capacity(h * h);
    for u in points {
        for v in points {
            let e = v.scale(m as i64).sub(u);
            entries.push(walker.coeff(&e));
        }
    }
    Matrix::new(ring.clone(), h, entries).with_labels(points.to_vec())
}

/// A single β_m(μ).
pub fn beta<R: PadicRing>(f: &LaurentPoly<R>, region: &Region, m: u64) -> Result<BetaMatrix<R>> {
    let matrix = beta_family(f, region, &[m])?.pop().unwrap();
    Ok(BetaMatrix {
        m,
        region: region.describe(),
        matrix,
    })
}

/// β_p(μ) with its invertibility verdict.
pub fn hasse_witt<R: PadicRing>(f: &LaurentPoly<R>, region: &Region) -> Result<HasseWitt<R>> {
    let b = beta(f, region, f.ring().prime())?;
    let invertible = b.matrix.invert().is_ok();
    Ok(HasseWitt {
        matrix: b.matrix,
        invertible_mod_p: invertible,
    })
}

fn checked_pow(p: u64, s: u32) -> Result<u64> {
    p.checked_pow(s)
        .ok_or_else(|| Error::SizeGuard(format!("p^s = {p}^{s} exceeds u64")))
}

/// Λ_σ = β_{p^s}(μ)·σ(β_{p^{s-1}}(μ))^{-1} at the ring's precision s.
pub fn lambda_sigma<R: PadicRing>(f: &LaurentPoly<R>, region: &Region) -> Result<FrobeniusMatrix<R>> {
    let ring = f.ring();
    let s = ring.precision();
    let ms = [checked_pow(ring.prime(), s)?, checked_pow(ring.prime(), s - 1)?];
    let betas = beta_family(f, region, &ms)?;
    let inv = betas[1].sigma().invert()?;
    Ok(FrobeniusMatrix {
        precision: s,
        region: region.describe(),
        matrix: betas[0].mul(&inv)?,
    })
}

/// N_δ = δ(β_{p^s}(μ))·β_{p^s}(μ)^{-1} at the ring's precision s.
pub fn n_delta<R: PadicRing>(
    f: &LaurentPoly<R>,
    region: &Region,
    kind: Derivation,
) -> Result<ConnectionMatrix<R>> {
    let ring = f.ring();
    let s = ring.precision();
    let b = beta_family(f, region, &[checked_pow(ring.prime(), s)?])?.pop().unwrap();
    let inv = b.invert()?;
    Ok(ConnectionMatrix {
        derivation: kind,
        precision: s,
        region: region.describe(),
        matrix: b.derive(kind).mul(&inv)?,
    })
}

/// Comparison window in t-degrees for congruences mod (p^s, t^W).
/// d/dt loses one reliable degree; everything else sees the full cap.
fn window_for<R: PadicRing>(ring: &R, kind: Option<Derivation>) -> Option<usize> {
    ring.t_cap().map(|cap| match kind {
        Some(Derivation::Ddt) => cap.saturating_sub(1),
        _ => cap,
    })
}

fn witnesses_below<R: PadicRing>(
    lhs: &Matrix<R>,
    rhs: &Matrix<R>,
    s: u32,
    window: Option<usize>,
) -> Result<Vec<Witness>> {
    let ring = lhs.ring().clone();
    let mut out = Vec::new();
    let n = lhs.size();
    for i in 0..n {
        for j in 0..n {
            let mut d = ring.sub(lhs.at(i, j), rhs.at(i, j));
            if let Some(w) = window {
                d = ring.truncate_t(&d, w);
            }
            let v = ring.valuation(&d);
            if v < s {
                let (row, col) = match lhs.labels() {
                    Some(l) => (l[i].to_string(), l[j].to_string()),
                    None => (i.to_string(), j.to_string()),
                };
                out.push(Witness {
                    row,
                    col,
                    found_valuation: v,
                    required_valuation: s,
                });
            }
        }
    }
    Ok(out)
}

/// Check β_{mp^s} ≡ Λ_σ·σ(β_{mp^{s-1}}) mod p^s given the three matrices.
pub fn check_beta_step<R: PadicRing>(
    lambda: &Matrix<R>,
    beta_hi: &Matrix<R>,
    beta_lo: &Matrix<R>,
    p: u64,
    s: u32,
    m: u64,
    region: &str,
) -> Result<CheckReport> {
    let rhs = lambda.mul(&beta_lo.sigma())?;
    let wit = witnesses_below(beta_hi, &rhs, s, window_for(beta_hi.ring(), None))?;
    let rep = CheckReport::new("beta_lambda", p, s, region).with_m(m);
    Ok(if wit.is_empty() { rep } else { rep.fail(wit) })
}

/// Theorem-style β congruence over a grid of (m, s).
pub fn verify_beta_congruence<R: PadicRing>(
    f: &LaurentPoly<R>,
    region: &Region,
    s_max: u32,
    m_list: &[u64],
) -> Result<Vec<CheckReport>> {
    let ring = f.ring();
    let p = ring.prime();
    if ring.precision() < s_max {
        return Err(Error::Config(format!(
            "ring precision {} below requested s_max {}",
            ring.precision(),
            s_max
        )));
    }
    let lambda = lambda_sigma(f, region)?.matrix;
    // gather every needed power in one walk
    let mut ms = Vec::new();
    for s in 1..=s_max {
        for &m in m_list {
            ms.push(m * checked_pow(p, s)?);
            ms.push(m * checked_pow(p, s - 1)?);
        }
    }
    ms.sort();
    ms.dedup();
    let betas = beta_family(f, region, &ms)?;
    let lookup = |m: u64| &betas[ms.binary_search(&m).unwrap()];
    let mut reports = Vec::new();
    for s in 1..=s_max {
        for &m in m_list {
            reports.push(check_beta_step(
                &lambda,
                lookup(m * checked_pow(p, s)?),
                lookup(m * checked_pow(p, s - 1)?),
                p,
                s,
                m,
                &region.describe(),
            )?);
        }
    }
    Ok(reports)
}

/// Check δ(β_{mp^s}) ≡ N_δ·β_{mp^s} mod (p^s, t^W) given the matrices.
pub fn check_delta_step<R: PadicRing>(
    n_delta: &Matrix<R>,
    beta_hi: &Matrix<R>,
    kind: Derivation,
    p: u64,
    s: u32,
    m: u64,
    region: &str,
) -> Result<CheckReport> {
    let lhs = beta_hi.derive(kind);
    let rhs = n_delta.mul(beta_hi)?;
    let wit = witnesses_below(&lhs, &rhs, s, window_for(beta_hi.ring(), Some(kind)))?;
    let rep = CheckReport::new("delta_n", p, s, region).with_m(m);
    Ok(if wit.is_empty() { rep } else { rep.fail(wit) })
}

/// Connection congruence over a grid of (m, s).
pub fn verify_delta_congruence<R: PadicRing>(
    f: &LaurentPoly<R>,
    region: &Region,
    s_max: u32,
    m_list: &[u64],
    kind: Derivation,
) -> Result<Vec<CheckReport>> {
    let ring = f.ring();
    let p = ring.prime();
    if ring.precision() < s_max {
        return Err(Error::Config(format!(
            "ring precision {} below requested s_max {}",
            ring.precision(),
            s_max
        )));
    }
    let nd = n_delta(f, region, kind)?.matrix;
    let mut ms = Vec::new();
    for s in 1..=s_max {
        for &m in m_list {
            ms.push(m * checked_pow(p, s)?);
        }
    }
    ms.sort();
    ms.dedup();
    let betas = beta_family(f, region, &ms)?;
    let mut reports = Vec::new();
    for s in 1..=s_max {
        for &m in m_list {
            let mp = m * checked_pow(p, s)?;
            reports.push(check_delta_step(
                &nd,
                &betas[ms.binary_search(&mp).unwrap()],
                kind,
                p,
                s,
                m,
                &region.describe(),
            )?);
        }
    }
    Ok(reports)
}

/// Stability of the ratios: β_{p^{s+1}}·σ(β_{p^s})^{-1} ≡
/// β_{p^s}·σ(β_{p^{s-1}})^{-1} mod p^s for 1 <= s <= s_max.
pub fn verify_intro_stability<R: PadicRing>(
    f: &LaurentPoly<R>,
    region: &Region,
    s_max: u32,
) -> Result<Vec<CheckReport>> {
    let ring = f.ring();
    let p = ring.prime();
    let ms: Vec<u64> = (0..=s_max + 1).map(|s| checked_pow(p, s)).collect::<Result<_>>()?;
    let betas = beta_family(f, region, &ms)?;
    let mut reports = Vec::new();
    for s in 1..=s_max as usize {
        let new_ratio = betas[s + 1].mul(&betas[s].sigma().invert()?)?;
        let old_ratio = betas[s].mul(&betas[s - 1].sigma().invert()?)?;
        let wit = witnesses_below(&new_ratio, &old_ratio, s as u32, window_for(ring, None))?;
        let rep = CheckReport::new("ratio_stability", p, s as u32, region.describe());
        reports.push(if wit.is_empty() { rep } else { rep.fail(wit) });
    }
    Ok(reports)
}

/// Frobenius-compatible row: c·β_{p^s} ≡ σ(c)·σ(β_{p^{s-1}}) mod p^s.
/// This is the inversion-free form of c·Λ_σ = σ(c).
pub fn check_row_frobenius<R: PadicRing>(
    row: &[R::Elem],
    beta_hi: &Matrix<R>,
    beta_lo: &Matrix<R>,
    s: u32,
    label: &str,
    region: &str,
) -> CheckReport {
    let ring = beta_hi.ring().clone();
    let lhs = beta_hi.row_mul(row);
    let sigma_row: Vec<R::Elem> = row.iter().map(|c| ring.frobenius(c)).collect();
    let rhs = beta_lo.sigma().row_mul(&sigma_row);
    let window = window_for(&ring, None);
    let mut wit = Vec::new();
    for (j, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
        let mut d = ring.sub(a, b);
        if let Some(w) = window {
            d = ring.truncate_t(&d, w);
        }
        let v = ring.valuation(&d);
        if v < s {
            wit.push(Witness {
                row: label.to_string(),
                col: j.to_string(),
                found_valuation: v,
                required_valuation: s,
            });
        }
    }
    let rep = CheckReport::new("row_frobenius", ring.prime(), s, region)
        .with_note(format!("row {label}"));
    if wit.is_empty() {
        rep
    } else {
        rep.fail(wit)
    }
}

/// Horizontal row: δ(c·β_{p^s}) ≡ 0 mod p^s, the inversion-free form of
/// c·N_δ = -δ(c).
pub fn check_row_horizontal<R: PadicRing>(
    row: &[R::Elem],
    beta_hi: &Matrix<R>,
    kind: Derivation,
    s: u32,
    label: &str,
    region: &str,
) -> CheckReport {
    let ring = beta_hi.ring().clone();
    let prod = beta_hi.row_mul(row);
    let window = window_for(&ring, Some(kind));
    let mut wit = Vec::new();
    for (j, a) in prod.iter().enumerate() {
        let mut d = ring.derive(a, kind);
        if let Some(w) = window {
            d = ring.truncate_t(&d, w);
        }
        let v = ring.valuation(&d);
        if v < s {
            wit.push(Witness {
                row: label.to_string(),
                col: j.to_string(),
                found_valuation: v,
                required_valuation: s,
            });
        }
    }
    let rep = CheckReport::new("row_horizontal", ring.prime(), s, region)
        .with_note(format!("row {label}"));
    if wit.is_empty() {
        rep
    } else {
        rep.fail(wit)
    }
}

/// Fixed-row checks for f_0 = f and f_i = x_i ∂f/∂x_i over μ = Δ.
pub fn verify_fixed_rows<R: PadicRing>(
    f: &LaurentPoly<R>,
    s_max: u32,
    kind: Derivation,
) -> Result<Vec<CheckReport>> {
    let ring = f.ring();
    let p = ring.prime();
    let polytope = NewtonPolytope::from_support(&f.support())?;
    let region = polytope.full_region();
    let ms: Vec<u64> = (0..=s_max).map(|s| checked_pow(p, s)).collect::<Result<_>>()?;
    let betas = beta_family(f, &region, &ms)?;
    let mut reports = Vec::new();
    for (i, fi) in f.log_derivative_numerators().iter().enumerate() {
        let row: Vec<R::Elem> = region.points().iter().map(|u| fi.coefficient(u)).collect();
        let label = format!("f_{i}");
        for s in 1..=s_max as usize {
            reports.push(check_row_frobenius(
                &row,
                &betas[s],
                &betas[s - 1],
                s as u32,
                &label,
                &region.describe(),
            ));
            reports.push(check_row_horizontal(
                &row,
                &betas[s],
                kind,
                s as u32,
                &label,
                &region.describe(),
            ));
        }
    }
    Ok(reports)
}

/// One diagonal block of the semi-simple decomposition.
#[derive(Debug, Clone)]
pub struct Block {
    /// Lattice points indexing the block, in basis order.
    pub points: Vec<ExponentVector>,
    /// Face vertices when the block comes from a face interior.
    pub face_vertices: Option<Vec<ExponentVector>>,
    pub invertible_mod_p: bool,
}

/// Structure report for β_m(μ^{(l)}) at one filtration level.
#[derive(Debug, Clone)]
pub struct LevelBlockReport {
    pub level: usize,
    pub m: u64,
    pub blocks: Vec<Block>,
    /// Entries outside the allowed pattern that are nonzero.
    pub pattern_violations: Vec<(ExponentVector, ExponentVector)>,
    /// Face blocks that do not equal the Hasse-Witt matrix of f|_η.
    pub restriction_mismatches: Vec<Vec<ExponentVector>>,
    /// Geometry says the entry must vanish but cone membership disagrees.
    pub geometry_violations: Vec<(ExponentVector, ExponentVector)>,
    pub whole_invertible_mod_p: bool,
}

impl LevelBlockReport {
    pub fn passed(&self) -> bool {
        self.pattern_violations.is_empty()
            && self.restriction_mismatches.is_empty()
            && self.geometry_violations.is_empty()
            && (self.whole_invertible_mod_p == self.blocks.iter().all(|b| b.invertible_mod_p))
    }
}

/// Verify the block structure of β_m(μ^{(l)}) for every level l >= 1:
/// diagonal blocks are the β_m of codim-l face interiors and of μ^{(l-1)},
/// off-diagonal entries vanish outside the trailing column block, and the
/// face blocks equal the β_m of the face restrictions f|_η.
pub fn block_decomposition<R: PadicRing>(
    f: &LaurentPoly<R>,
    m: u64,
) -> Result<Vec<LevelBlockReport>> {
    let ring = f.ring();
    let polytope = NewtonPolytope::from_support(&f.support())?;
    // vertex coefficients must be units up to a t-power (the parameter is
    // invertible in the localized ring the decomposition lives over)
    for v in polytope.vertices() {
        if !ring.is_unit_up_to_t(&f.coefficient(v)) {
            return Err(Error::NotAUnit {
                valuation: ring.valuation(&f.coefficient(v)),
            });
        }
    }
    let mut out = Vec::new();
    for level in 1..=polytope.intrinsic_dim() {
        let region = polytope.level_region(level)?;
        if region.points().is_empty() {
            continue;
        }
        let big = beta_family(f, &region, &[m])?.pop().unwrap();
        let points = region.points();
        let classes = region.point_classes();

        // group points: (codim == level) by face, then the tail μ^{(l-1)}
        let mut groups: Vec<(Option<usize>, Vec<usize>)> = Vec::new();
        for (i, &(codim, face)) in classes.iter().enumerate() {
            if codim == level {
                match groups.last_mut() {
                    Some((Some(fid), idxs)) if *fid == face => idxs.push(i),
                    _ => groups.push((Some(face), vec![i])),
                }
            } else {
                match groups.last_mut() {
                    Some((None, idxs)) => idxs.push(i),
                    _ => groups.push((None, vec![i])),
                }
            }
        }

        let tail_group = groups.len().saturating_sub(
            groups.last().is_some_and(|(f, _)| f.is_none()) as usize,
        );
        let mut pattern_violations = Vec::new();
        let mut geometry_violations = Vec::new();
        for (gi, (_, rows)) in groups.iter().enumerate() {
            for (gj, (_, cols)) in groups.iter().enumerate() {
                // allowed: diagonal blocks and the trailing column block
                if gi == gj || gj == tail_group {
                    continue;
                }
                for &i in rows {
                    for &j in cols {
                        if !ring.is_zero(big.at(i, j)) {
                            pattern_violations.push((points[i].clone(), points[j].clone()));
                        }
                        let e = points[j].scale(m as i64).sub(&points[i]);
                        if polytope.cone_contains(m - 1, &e) {
                            geometry_violations.push((points[i].clone(), points[j].clone()));
                        }
                    }
                }
            }
        }

        let mut blocks = Vec::new();
        let mut restriction_mismatches = Vec::new();
        for (fid, idxs) in &groups {
            let block_points: Vec<ExponentVector> = idxs.iter().map(|&i| points[i].clone()).collect();
            let sub = Matrix::new(
                ring.clone(),
                idxs.len(),
                idxs.iter()
                    .flat_map(|&i| idxs.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| big.at(i, j).clone())
                    .collect(),
            )
            .with_labels(block_points.clone());
            let invertible = sub.invert().is_ok();
            let face_vertices = fid.map(|face| {
                polytope.faces()[face]
                    .vertex_ids
                    .iter()
                    .map(|&v| polytope.vertices()[v].clone())
                    .collect::<Vec<_>>()
            });
            if let Some(fverts) = &face_vertices {
                // the block must equal β_m of the restriction to the face
                let restricted = LaurentPoly::from_terms(
                    ring.clone(),
                    f.dim(),
                    f.iter_terms()
                        .filter(|(e, _)| polytope.face_contains(fid.unwrap(), e))
                        .map(|(e, c)| (e.clone(), c.clone())),
                );
                let sub_poly = NewtonPolytope::from_support(&restricted.support())?;
                let sub_region = sub_poly.interior_region();
                let expected = beta_family(&restricted, &sub_region, &[m])?.pop().unwrap();
                // both are indexed by the same point set in canonical order
                let same = sub_region.points() == block_points.as_slice()
                    && (0..sub.size())
                        .all(|i| (0..sub.size()).all(|j| sub.at(i, j) == expected.at(i, j)));
                if !same {
                    restriction_mismatches.push(fverts.clone());
                }
            }
            blocks.push(Block {
                points: block_points,
                face_vertices,
                invertible_mod_p: invertible,
            });
        }

        out.push(LevelBlockReport {
            level,
            m,
            blocks,
            pattern_violations,
            restriction_mismatches,
            geometry_violations,
            whole_invertible_mod_p: big.invert().is_ok(),
        });
    }
    Ok(out)
}

pub fn reports_all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.status == Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ring::{SeriesRing, Zmod};
    use num_bigint::BigUint;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from(v)
    }

    /// Independent single-coefficient oracle: multiply out f^(m-1) by
    /// naive repeated multiplication and read one coefficient.
    fn beta_entry_oracle<R: PadicRing>(
        f: &LaurentPoly<R>,
        m: u64,
        u: &ExponentVector,
        v: &ExponentVector,
    ) -> <R as Ring>::Elem {
        let mut pow = LaurentPoly::one(f.ring().clone(), f.dim());
        for _ in 1..m {
            pow = pow.multiply(f).unwrap();
        }
        pow.coefficient(&v.scale(m as i64).sub(u))
    }

    #[test]
    fn beta_one_is_identity() {
        let ring = Zmod::new(5, 2);
        let f = fixtures::legendre_at(&ring, 2);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.full_region();
        let b = beta(&f, &region, 1).unwrap();
        assert_eq!(
            b.matrix,
            Matrix::identity(ring, region.points().len()).with_labels(region.points().to_vec())
        );
    }

    #[test]
    fn legendre_beta_3_interior() {
        // interior β_3 of y^2 - x(x-1)(x-z) is the 1x1 matrix [2(1+z)]
        let ring = SeriesRing::new(3, 2, 16);
        let f = fixtures::legendre_series(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.interior_region();
        let b = beta(&f, &region, 3).unwrap();
        assert_eq!(*b.matrix.at(0, 0), ring.from_coeffs(&[2, 2]));
        assert_eq!(
            *b.matrix.at(0, 0),
            beta_entry_oracle(&f, 3, &ev(&[1, 1]), &ev(&[1, 1]))
        );
    }

    #[test]
    fn cubic_family_beta_5_matches_closed_forms() {
        // β_5 of y^2 + t x^3 + x y + x over Z/25, cap 16:
        // diag(1, 1, t^4, 6t^2, 1+12t), last column (24t, 12t, 12, 4, 1+12t)
        let ring = SeriesRing::new(5, 2, 16);
        let f = fixtures::cubic_family(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.full_region();
        assert_eq!(
            region.points(),
            &[ev(&[0, 2]), ev(&[1, 0]), ev(&[3, 0]), ev(&[2, 0]), ev(&[1, 1])]
        );
        let b = beta(&f, &region, 5).unwrap();
        let m = &b.matrix;
        assert_eq!(*m.at(0, 0), ring.one());
        assert_eq!(*m.at(1, 1), ring.one());
        assert_eq!(*m.at(2, 2), ring.monomial(1, 4));
        assert_eq!(*m.at(3, 3), ring.monomial(6, 2));
        assert_eq!(*m.at(4, 4), ring.from_coeffs(&[1, 12]));
        assert_eq!(*m.at(0, 4), ring.monomial(24, 1));
        assert_eq!(*m.at(1, 4), ring.monomial(12, 1));
        assert_eq!(*m.at(2, 4), ring.from_i64(12));
        assert_eq!(*m.at(3, 4), ring.from_i64(4));
        // all entries below the diagonal blocks vanish
        for i in 0..5 {
            for j in 0..4 {
                if i != j {
                    assert!(ring.is_zero(m.at(i, j)), "entry ({i},{j})");
                }
            }
        }
        // cross-check a dense entry against the naive oracle
        assert_eq!(
            *m.at(0, 4),
            beta_entry_oracle(&f, 5, &ev(&[0, 2]), &ev(&[1, 1]))
        );
    }

    #[test]
    fn lambda_one_vertex_scalar_is_one() {
        // region = one vertex over Z_p: Λ = [1]
        let ring = Zmod::new(5, 3);
        let f = fixtures::hypercube(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.one_vertex_region(&ev(&[0, 0])).unwrap();
        let lam = lambda_sigma(&f, &region).unwrap();
        assert_eq!(*lam.matrix.at(0, 0), ring.one());
    }

    #[test]
    fn lambda_one_vertex_series_is_sigma_ratio() {
        // coefficient 1+t at the vertex: Λ = [σ(1+t)/(1+t)]
        let ring = SeriesRing::new(3, 2, 12);
        let f = fixtures::hypercube_with_vertex_series(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.one_vertex_region(&ev(&[0, 0])).unwrap();
        let lam = lambda_sigma(&f, &region).unwrap();
        let fv = ring.from_coeffs(&[1, 1]);
        let expected = ring.mul(&ring.frobenius(&fv), &ring.inverse(&fv).unwrap());
        assert_eq!(*lam.matrix.at(0, 0), expected);
    }

    #[test]
    fn n_delta_constant_coefficients_vanishes() {
        let ring = SeriesRing::new(3, 2, 12);
        let f = fixtures::hypercube(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.full_region();
        let n = n_delta(&f, &region, Derivation::Ddt).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(ring.is_zero(n.matrix.at(i, j)));
            }
        }
    }

    #[test]
    fn n_delta_one_vertex_sign() {
        // N = -δ(f_v)/f_v at a one-vertex region (the defining formula
        // gives (p^s-1)·δ(f_v)/f_v ≡ -δ(f_v)/f_v)
        let ring = SeriesRing::new(3, 2, 12);
        let f = fixtures::hypercube_with_vertex_series(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.one_vertex_region(&ev(&[0, 0])).unwrap();
        let n = n_delta(&f, &region, Derivation::Theta).unwrap();
        let fv = ring.from_coeffs(&[1, 1]);
        let expected = ring.neg(&ring.mul(
            &ring.derive(&fv, Derivation::Theta),
            &ring.inverse(&fv).unwrap(),
        ));
        assert_eq!(*n.matrix.at(0, 0), expected);
    }

    #[test]
    fn beta_prime_power_product_mod_p() {
        // β_{p^s} ≡ β_p·σ(β_p)···σ^{s-1}(β_p) mod p
        let ring = SeriesRing::new(3, 1, 16);
        let f = fixtures::legendre_series(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.interior_region();
        let betas = beta_family(&f, &region, &[3, 9, 27]).unwrap();
        let b3 = &betas[0];
        let prod2 = b3.mul(&b3.sigma()).unwrap();
        assert_eq!(prod2.difference_valuation(&betas[1], None).unwrap(), 1);
        let prod3 = prod2.mul(&b3.sigma().sigma()).unwrap();
        assert_eq!(prod3.difference_valuation(&betas[2], None).unwrap(), 1);
    }

    #[test]
    fn lambda_precision_tower() {
        // Λ computed at precision s+1 reduces mod p^s to Λ at precision s
        for s in [1u32, 2] {
            let hi = SeriesRing::new(3, s + 1, 16);
            let lo = SeriesRing::new(3, s, 16);
            let f_hi = fixtures::legendre_series(&hi);
            let f_lo = fixtures::legendre_series(&lo);
            let poly = NewtonPolytope::from_support(&f_hi.support()).unwrap();
            let region = poly.interior_region();
            let lam_hi = lambda_sigma(&f_hi, &region).unwrap().matrix;
            let lam_lo = lambda_sigma(&f_lo, &region).unwrap().matrix;
            let reduced = lo.reduce_elem(lam_hi.at(0, 0));
            assert_eq!(lo.valuation(&lo.sub(&reduced, lam_lo.at(0, 0))), s);
        }
    }

    #[test]
    fn beta_congruence_verifier_passes_and_detects_mutation() {
        let ring = SeriesRing::new(3, 2, 16);
        let f = fixtures::legendre_series(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.interior_region();
        let reports = verify_beta_congruence(&f, &region, 2, &[1, 2]).unwrap();
        assert!(reports_all_pass(&reports), "{reports:?}");

        // negative control: corrupt one entry of β_{mp^s}
        let lambda = lambda_sigma(&f, &region).unwrap().matrix;
        let betas = beta_family(&f, &region, &[9, 3]).unwrap();
        let mut bad = betas[0].clone();
        let corrupted = ring.add(bad.at(0, 0), &ring.one());
        bad.set(0, 0, corrupted);
        let rep = check_beta_step(&lambda, &bad, &betas[1], 3, 2, 1, "interior").unwrap();
        assert_eq!(rep.status, Status::Fail);
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn delta_congruence_verifier() {
        let ring = SeriesRing::new(3, 2, 16);
        let f = fixtures::cubic_family(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.interior_region();
        let reports =
            verify_delta_congruence(&f, &region, 2, &[1, 2], Derivation::Theta).unwrap();
        assert!(reports_all_pass(&reports), "{reports:?}");
    }

    #[test]
    fn intro_stability_legendre() {
        let ring = SeriesRing::new(3, 2, 16);
        let f = fixtures::legendre_series(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.interior_region();
        let reports = verify_intro_stability(&f, &region, 1).unwrap();
        assert!(reports_all_pass(&reports), "{reports:?}");
    }

    #[test]
    fn fixed_rows_cubic_family() {
        let ring = SeriesRing::new(3, 2, 16);
        let f = fixtures::cubic_family(&ring);
        let reports = verify_fixed_rows(&f, 2, Derivation::Theta).unwrap();
        assert!(reports_all_pass(&reports), "{reports:?}");
    }

    #[test]
    fn fixed_rows_literal_cubic_rows() {
        // the literal rows (1,1,t,0,1), (2,0,0,0,1), (0,1,3t,0,1)
        let ring = SeriesRing::new(3, 2, 16);
        let f = fixtures::cubic_family(&ring);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.full_region();
        let betas = beta_family(&f, &region, &[1, 3, 9]).unwrap();
        let t = ring.monomial(1, 1);
        let rows: Vec<(&str, Vec<crate::ring::Series>)> = vec![
            (
                "(1,1,t,0,1)",
                vec![ring.one(), ring.one(), t.clone(), ring.zero(), ring.one()],
            ),
            (
                "(2,0,0,0,1)",
                vec![ring.from_i64(2), ring.zero(), ring.zero(), ring.zero(), ring.one()],
            ),
            (
                "(0,1,3t,0,1)",
                vec![ring.zero(), ring.one(), ring.monomial(3, 1), ring.zero(), ring.one()],
            ),
        ];
        for (label, row) in rows {
            for s in 1..=2u32 {
                let rep = check_row_frobenius(
                    &row,
                    &betas[s as usize],
                    &betas[s as usize - 1],
                    s,
                    label,
                    "full",
                );
                assert!(rep.passed(), "{label} s={s}: {rep:?}");
                let rep = check_row_horizontal(
                    &row,
                    &betas[s as usize],
                    Derivation::Theta,
                    s,
                    label,
                    "full",
                );
                assert!(rep.passed(), "{label} s={s}: {rep:?}");
            }
        }
    }

    #[test]
    fn block_structure_cubic_family() {
        let ring = SeriesRing::new(5, 2, 16);
        let f = fixtures::cubic_family(&ring);
        for m in [3u64, 5] {
            let reports = block_decomposition(&f, m).unwrap();
            for rep in &reports {
                assert!(rep.passed(), "m={m} level={} {rep:?}", rep.level);
            }
        }
    }

    #[test]
    fn block_structure_hypercube_diagonal() {
        let ring = Zmod::new(3, 2);
        let f = fixtures::hypercube(&ring);
        let reports = block_decomposition(&f, 3).unwrap();
        for rep in &reports {
            assert!(rep.passed(), "{rep:?}");
        }
        // level 1 is empty (all square lattice points are vertices);
        // level 2 has the four one-vertex blocks with unit entries
        assert!(reports.iter().all(|r| r.level != 1));
        let level2 = reports.iter().find(|r| r.level == 2).unwrap();
        assert_eq!(level2.blocks.len(), 4);
        for b in &level2.blocks {
            assert!(b.invertible_mod_p);
        }
    }

    #[test]
    fn zero_blocks_exact() {
        // entries (u outside a face, v on it) vanish exactly
        let ring = Zmod::new(7, 2);
        let f = fixtures::legendre_at(&ring, 2);
        let polytope = NewtonPolytope::from_support(&f.support()).unwrap();
        let region = polytope.full_region();
        let b = beta(&f, &region, 7).unwrap();
        let pts = region.points().to_vec();
        for (i, u) in pts.iter().enumerate() {
            for (j, v) in pts.iter().enumerate() {
                for (fi, face) in polytope.faces().iter().enumerate() {
                    if face.dim < polytope.intrinsic_dim()
                        && polytope.face_contains(fi, v)
                        && !polytope.face_contains(fi, u)
                    {
                        assert_eq!(*b.matrix.at(i, j), BigUint::default(), "u={u} v={v}");
                    }
                }
            }
        }
    }
}
