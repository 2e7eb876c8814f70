//! Newton polytope geometry: exact convex hull, face lattice, the
//! face-complement topology, lattice points of open regions and cone
//! membership. All arithmetic is exact (integers and rationals); lower
//! dimensional polytopes are handled in intrinsic lattice coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::laurent::ExponentVector;

const MAX_AMBIENT_DIM: usize = 4;

/// A facet inequality <a, x> <= c in intrinsic coordinates, with a primitive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub bound: i64,
}

/// A face of the polytope: its dimension, the vertices lying on it and
/// the facets tight on it. Faces are sorted by (dim, vertex list).
#[derive(Debug, Clone, Serialize)]
pub struct Face {
    pub dim: usize,
    pub vertex_ids: Vec<usize>,
    pub tight_facets: Vec<usize>,
}

/// The Newton polytope of a support set, with its face lattice.
#[derive(Debug)]
pub struct NewtonPolytope {
    ambient_dim: usize,
    intrinsic_dim: usize,
    /// Base point of the affine hull (a support point, ambient coords).
    base: ExponentVector,
    /// Basis rows of the saturated direction lattice, ambient coords.
    basis: Vec<Vec<i64>>,
    /// All distinct support points, ambient coords, sorted.
    support: Vec<ExponentVector>,
    /// Intrinsic integer coordinates of each support point.
    support_intr: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    /// Vertex points (ambient), sorted; indices refer to this list.
    vertices: Vec<ExponentVector>,
    vertices_intr: Vec<Vec<i64>>,
    faces: Vec<Face>,
    /// Lattice points of the polytope, ambient coords, lex sorted.
    lattice: Vec<ExponentVector>,
    lattice_intr: Vec<Vec<i64>>,
    /// Index of the minimal face containing each lattice point.
    lattice_min_face: Vec<usize>,
}

impl NewtonPolytope {
    /// Exact hull of a non-empty support set (ambient dimension <= 4).
    pub fn from_support(support: &[ExponentVector]) -> Result<Arc<Self>> {
        if support.is_empty() {
            return Err(Error::InvalidRegion("empty support".into()));
        }
        let n = support[0].dim();
        if n > MAX_AMBIENT_DIM {
            return Err(Error::SizeGuard(format!(
                "ambient dimension {n} exceeds {MAX_AMBIENT_DIM}"
            )));
        }
        let mut pts: Vec<ExponentVector> = support.to_vec();
        pts.sort();
        pts.dedup();
        for p in &pts {
            if p.dim() != n {
                return Err(Error::Mismatch("support points of mixed dimension".into()));
            }
        }

        let base = pts[0].clone();
        let diffs: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| p.sub(&base).0.to_vec())
            .collect();
        let basis = saturated_row_basis(&diffs, n);
        let d = basis.len();

        let support_intr: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| intrinsic_coords(&p.sub(&base).0, &basis).expect("support point in hull lattice"))
            .collect();

        let facets = enumerate_facets(&support_intr, d);
        let (vertex_idx, vertices_intr) = find_vertices(&support_intr, &facets, d);
        let vertices: Vec<ExponentVector> = vertex_idx.iter().map(|&i| pts[i].clone()).collect();

        let faces = build_face_lattice(&vertices_intr, &facets, d);

        let (lattice_intr, lattice) = enumerate_lattice(&vertices_intr, &facets, &base, &basis);
        let lattice_min_face = lattice_intr
            .iter()
            .map(|z| minimal_face_index(z, &facets, &faces, &vertices_intr))
            .collect();

        Ok(Arc::new(NewtonPolytope {
            ambient_dim: n,
            intrinsic_dim: d,
            base,
            basis,
            support: pts,
            support_intr,
            facets,
            vertices,
            vertices_intr,
            faces,
            lattice,
            lattice_intr,
            lattice_min_face,
        }))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn support(&self) -> &[ExponentVector] {
        &self.support
    }

    /// All lattice points of the polytope, lex sorted, ambient coords.
    pub fn lattice_points(&self) -> &[ExponentVector] {
        &self.lattice
    }

    /// Lattice points strictly inside every facet (relative interior).
    pub fn interior_lattice_points(&self) -> Vec<ExponentVector> {
        self.lattice
            .iter()
            .zip(&self.lattice_min_face)
            .filter(|(_, &f)| self.faces[f].dim == self.intrinsic_dim)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Codimension of the minimal face containing a lattice point of Δ.
    pub fn codim_class(&self, point: &ExponentVector) -> Option<usize> {
        let i = self.lattice.iter().position(|p| p == point)?;
        Some(self.intrinsic_dim - self.faces[self.lattice_min_face[i]].dim)
    }

    /// Whether a lattice point of Δ lies on the given face.
    pub fn face_contains(&self, face_id: usize, point: &ExponentVector) -> bool {
        let Some(i) = self.lattice.iter().position(|p| p == point) else {
            return false;
        };
        let min_face = &self.faces[self.lattice_min_face[i]];
        let target = &self.faces[face_id];
        min_face
            .vertex_ids
            .iter()
            .all(|v| target.vertex_ids.contains(v))
            && target.tight_facets.iter().all(|f| min_face.tight_facets.contains(f))
    }

    /// True iff u (with pole order u0) lies in u0·Δ, i.e. in the cone C(Δ).
    pub fn cone_contains(&self, u0: u64, u: &ExponentVector) -> bool {
        self.cone_point_coords(u0, u).is_some()
    }

    /// Intrinsic rational coordinates of u relative to u0·Δ, when u lies
    /// in the scaled affine hull; also checks the facet inequalities.
    fn cone_point_coords(&self, u0: u64, u: &ExponentVector) -> Option<Vec<BigRational>> {
        if u0 == 0 {
            return if u.0.iter().all(|&c| c == 0) {
                Some(vec![BigRational::zero(); self.intrinsic_dim])
            } else {
                None
            };
        }
        let shifted: Vec<i64> = u
            .0
            .iter()
            .zip(&self.base.0)
            .map(|(&a, &b)| a - (u0 as i64) * b)
            .collect();
        let lam = rational_solve(&self.basis, &shifted)?;
        let scale = BigRational::from(BigInt::from(u0));
        for f in &self.facets {
            let mut acc = BigRational::zero();
            for (a, l) in f.normal.iter().zip(&lam) {
                acc += BigRational::from(BigInt::from(*a)) * l;
            }
            if acc > BigRational::from(BigInt::from(f.bound)) * &scale {
                return None;
            }
        }
        Some(lam)
    }

    /// Lattice points of m·Δ (ambient coords), for the cone machinery.
    pub fn scaled_lattice_points(&self, m: u64) -> Vec<ExponentVector> {
        if self.intrinsic_dim == 0 {
            return vec![ExponentVector(
                self.base.0.iter().map(|&c| c * m as i64).collect(),
            )];
        }
        let d = self.intrinsic_dim;
        let m_i = m as i64;
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in &self.vertices_intr {
            for j in 0..d {
                lo[j] = lo[j].min(v[j] * m_i);
                hi[j] = hi[j].max(v[j] * m_i);
            }
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        'scan: loop {
            let inside = self
                .facets
                .iter()
                .all(|f| dot(&f.normal, &cur) <= f.bound * m_i);
            if inside {
                out.push(self.intr_to_ambient_scaled(&cur, m_i));
            }
            for j in (0..d).rev() {
                cur[j] += 1;
                if cur[j] <= hi[j] {
                    continue 'scan;
                }
                cur[j] = lo[j];
            }
            break;
        }
        out.sort();
        out
    }

    fn intr_to_ambient_scaled(&self, lam: &[i64], m: i64) -> ExponentVector {
        let mut amb: SmallVec<[i64; 4]> = self.base.0.iter().map(|&c| c * m).collect();
        for (l, b) in lam.iter().zip(&self.basis) {
            for j in 0..self.ambient_dim {
                amb[j] += l * b[j];
            }
        }
        ExponentVector(amb)
    }

    /// Region of all points: the complement of the empty face union.
    pub fn full_region(self: &Arc<Self>) -> Region {
        self.level_region(self.intrinsic_dim).expect("full level in range")
    }

    /// The interior region Δ°.
    pub fn interior_region(self: &Arc<Self>) -> Region {
        self.level_region(0).expect("level 0 in range")
    }

    /// Complement of the union of faces of codimension > l.
    pub fn level_region(self: &Arc<Self>, l: usize) -> Result<Region> {
        if l > self.intrinsic_dim {
            return Err(Error::InvalidRegion(format!(
                "level {l} out of range 0..={}",
                self.intrinsic_dim
            )));
        }
        let excluded: Vec<usize> = (0..self.faces.len())
            .filter(|&f| self.intrinsic_dim - self.faces[f].dim > l)
            .collect();
        Ok(Region::new(self.clone(), RegionKind::Level(l), excluded))
    }

    /// The one-point region at a vertex: complement of all faces that
    /// avoid the vertex. Valid only when no other lattice point survives.
    pub fn one_vertex_region(self: &Arc<Self>, v: &ExponentVector) -> Result<Region> {
        let Some(vid) = self.vertices.iter().position(|w| w == v) else {
            return Err(Error::InvalidRegion(format!("{v} is not a vertex")));
        };
        let excluded: Vec<usize> = (0..self.faces.len())
            .filter(|&f| !self.faces[f].vertex_ids.contains(&vid))
            .collect();
        let region = Region::new(self.clone(), RegionKind::Vertex(v.clone()), excluded);
        if region.points() != [v.clone()] {
            return Err(Error::InvalidRegion(format!(
                "the single point {v} is not open: {} lattice points survive the face complement",
                region.points().len()
            )));
        }
        Ok(region)
    }

    /// Complement of an explicit union of faces, each given by the set of
    /// polytope vertices spanning it. Open by construction; errors when a
    /// spanned face does not exist in the lattice.
    pub fn face_complement_region(
        self: &Arc<Self>,
        excluded_vertex_sets: &[Vec<ExponentVector>],
    ) -> Result<Region> {
        let mut excluded = Vec::new();
        for spec in excluded_vertex_sets {
            let mut ids = BTreeSet::new();
            for v in spec {
                let Some(vid) = self.vertices.iter().position(|w| w == v) else {
                    return Err(Error::InvalidRegion(format!("{v} is not a vertex")));
                };
                ids.insert(vid);
            }
            let fid = self
                .faces
                .iter()
                .position(|f| f.vertex_ids.iter().copied().collect::<BTreeSet<_>>() == ids)
                .ok_or_else(|| {
                    Error::InvalidRegion("vertex set does not span a face".into())
                })?;
            excluded.push(fid);
        }
        Ok(Region::new(
            self.clone(),
            RegionKind::FaceComplement(excluded_vertex_sets.len()),
            excluded,
        ))
    }

    /// Diagnostic dump of the geometry.
    pub fn dump(&self) -> serde_json::Value {
        serde_json::json!({
            "ambient_dim": self.ambient_dim,
            "intrinsic_dim": self.intrinsic_dim,
            "vertices": self.vertices.iter().map(|v| v.0.to_vec()).collect::<Vec<_>>(),
            "facets": self.facets,
            "faces": self.faces,
            "lattice_points": self.lattice.iter().map(|v| v.0.to_vec()).collect::<Vec<_>>(),
        })
    }
}

/// How a region was constructed; used for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionKind {
    Level(usize),
    Vertex(ExponentVector),
    FaceComplement(usize),
}

/// An open set in the face topology: the complement of a union of faces,
/// carrying its lattice points in the canonical basis order
/// (codimension class descending, then face, then lexicographic).
#[derive(Debug, Clone)]
pub struct Region {
    polytope: Arc<NewtonPolytope>,
    kind: RegionKind,
    excluded_faces: Vec<usize>,
    points: Vec<ExponentVector>,
    /// (codim, minimal face id) per point, parallel to `points`.
    classes: Vec<(usize, usize)>,
}

impl Region {
    fn new(polytope: Arc<NewtonPolytope>, kind: RegionKind, excluded_faces: Vec<usize>) -> Self {
        let mut chosen: Vec<(usize, usize, ExponentVector)> = Vec::new();
        for (i, z) in polytope.lattice.iter().enumerate() {
            let min_face = polytope.lattice_min_face[i];
            // z lies in an excluded face iff its minimal face is a subface
            let dead = excluded_faces.iter().any(|&ex| {
                let exf = &polytope.faces[ex];
                polytope.faces[min_face]
                    .vertex_ids
                    .iter()
                    .all(|v| exf.vertex_ids.contains(v))
                    && exf
                        .tight_facets
                        .iter()
                        .all(|t| polytope.faces[min_face].tight_facets.contains(t))
            });
            if !dead {
                let codim = polytope.intrinsic_dim - polytope.faces[min_face].dim;
                chosen.push((codim, min_face, z.clone()));
            }
        }
        chosen.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let points = chosen.iter().map(|(_, _, z)| z.clone()).collect();
        let classes = chosen.iter().map(|(c, f, _)| (*c, *f)).collect();
        Region {
            polytope,
            kind,
            excluded_faces,
            points,
            classes,
        }
    }

    pub fn polytope(&self) -> &Arc<NewtonPolytope> {
        &self.polytope
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    /// Lattice points μ_Z in canonical order.
    pub fn points(&self) -> &[ExponentVector] {
        &self.points
    }

    /// Codimension class of each point, parallel to `points()`.
    pub fn point_classes(&self) -> &[(usize, usize)] {
        &self.classes
    }

    pub fn excluded_faces(&self) -> &[usize] {
        &self.excluded_faces
    }

    /// Whether (u0, u) lies in the cone C(μ): in C(Δ) but on no excluded face.
    pub fn cone_contains(&self, u0: u64, u: &ExponentVector) -> bool {
        let Some(lam) = self.polytope.cone_point_coords(u0, u) else {
            return false;
        };
        if u0 == 0 {
            // the apex survives every face complement
            return true;
        }
        let scale = BigRational::from(BigInt::from(u0));
        for &ex in &self.excluded_faces {
            let face = &self.polytope.faces[ex];
            let on_face = face.tight_facets.iter().all(|&fi| {
                let f = &self.polytope.facets[fi];
                let mut acc = BigRational::zero();
                for (a, l) in f.normal.iter().zip(&lam) {
                    acc += BigRational::from(BigInt::from(*a)) * l;
                }
                acc == BigRational::from(BigInt::from(f.bound)) * &scale
            });
            if on_face {
                return false;
            }
        }
        true
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RegionKind::Level(l) => {
                if *l == 0 {
                    "interior".into()
                } else if *l == self.polytope.intrinsic_dim {
                    "full".into()
                } else {
                    format!("level:{l}")
                }
            }
            RegionKind::Vertex(v) => format!("vertex:{v}"),
            RegionKind::FaceComplement(k) => format!("face-complement:{k}"),
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Basis of the saturation {x in Z^n : x in Q-span(rows)} via the left
/// kernel of an integer kernel matrix, both computed by exact HNF.
fn saturated_row_basis(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let nonzero: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&c| c != 0)).cloned().collect();
    if nonzero.is_empty() {
        return vec![];
    }
    // complement = integer basis of {y : rows · y = 0}
    let complement = integer_kernel(&nonzero, n);
    if complement.is_empty() {
        // full dimensional: the standard basis
        return (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
    }
    // saturation of the row space = kernel of the complement matrix
    integer_kernel(&complement, n)
}

/// Integer basis of {x in Z^n : M x = 0} for an integer matrix given by rows.
fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // Row-HNF of A = M^T with unimodular tracking: U A = H; rows of U
    // matching zero rows of H form a saturated kernel basis.
    let m = rows.len();
    let mut a: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..m).map(|j| rows[j][i] as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot_row = 0usize;
    for col in 0..m {
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..n {
                if a[r][col] != 0 {
                    best = match best {
                        None => Some(r),
                        Some(b) if a[r][col].abs() < a[b][col].abs() => Some(r),
                        keep => keep,
                    };
                }
            }
            let Some(b) = best else {
                break;
            };
            a.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let pv = a[pivot_row][col];
            let mut finished = true;
            for r in pivot_row + 1..n {
                if a[r][col] != 0 {
                    let q = a[r][col].div_euclid(pv);
                    for c in 0..m {
                        let s = a[pivot_row][c];
                        a[r][c] -= q * s;
                    }
                    for c in 0..n {
                        let s = u[pivot_row][c];
                        u[r][c] -= q * s;
                    }
                    if a[r][col] != 0 {
                        finished = false;
                    }
                }
            }
            if finished {
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == n {
            break;
        }
    }
    (pivot_row..n)
        .map(|r| u[r].iter().map(|&x| i64::try_from(x).expect("kernel fits i64")).collect())
        .collect()
}

/// Integer coordinates of `target` in terms of the basis rows, if any.
fn intrinsic_coords(target: &[i64], basis: &[Vec<i64>]) -> Option<Vec<i64>> {
    let lam = rational_solve(basis, target)?;
    let mut out = Vec::with_capacity(lam.len());
    for l in lam {
        if !l.is_integer() {
            return None;
        }
        out.push(i64::try_from(l.to_integer()).ok()?);
    }
    Some(out)
}

/// Solve lambda · basis = target over the rationals (basis rows spanning).
fn rational_solve(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let d = basis.len();
    let n = target.len();
    if d == 0 {
        return if target.iter().all(|&c| c == 0) {
            Some(vec![])
        } else {
            None
        };
    }
    // Gaussian elimination on the d x (n+...) system basis^T lam = target
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..d)
                .map(|i| BigRational::from(BigInt::from(basis[i][j])))
                .collect();
            row.push(BigRational::from(BigInt::from(target[j])));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(pr) = (r..n).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, pr);
        let pv = aug[r][c].clone();
        for x in aug[r].iter_mut() {
            *x /= pv.clone();
        }
        for i in 0..n {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for cc in 0..=d {
                    let delta = f.clone() * aug[r][cc].clone();
                    aug[i][cc] -= delta;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    // consistency: zero rows must have zero rhs
    for i in r..n {
        if !aug[i][d].is_zero() {
            return None;
        }
    }
    let mut lam = vec![BigRational::zero(); d];
    for (row, col) in pivots {
        lam[col] = aug[row][d].clone();
    }
    Some(lam)
}

/// Brute-force facet enumeration over all d-subsets of support points.
fn enumerate_facets(points: &[Vec<i64>], d: usize) -> Vec<Facet> {
    if d == 0 {
        return vec![];
    }
    let mut facets: Vec<Facet> = Vec::new();
    let idx: Vec<usize> = (0..points.len()).collect();
    for subset in combinations(&idx, d) {
        // normal = primitive kernel vector of the difference rows
        let p0 = &points[subset[0]];
        let diffs: Vec<Vec<i64>> = subset[1..]
            .iter()
            .map(|&i| (0..d).map(|j| points[i][j] - p0[j]).collect())
            .collect();
        let kernel = integer_kernel(&diffs, d);
        if kernel.len() != 1 {
            continue;
        }
        let mut normal = kernel.into_iter().next().unwrap();
        let mut bound = dot(&normal, p0);
        let mut any_below = false;
        let mut any_above = false;
        for q in points {
            let v = dot(&normal, q);
            if v < bound {
                any_below = true;
            }
            if v > bound {
                any_above = true;
            }
        }
        if any_below && any_above {
            continue;
        }
        if any_above {
            for c in normal.iter_mut() {
                *c = -*c;
            }
            bound = -bound;
        }
        let g = normal
            .iter()
            .fold(0i64, |acc, &c| num_integer::gcd(acc, c.abs()))
            .max(1);
        let f = Facet {
            normal: normal.iter().map(|&c| c / g).collect(),
            bound: bound.div_euclid(g),
        };
        debug_assert_eq!(bound % g, 0, "primitive normal keeps an integer bound");
        if !facets.contains(&f) {
            facets.push(f);
        }
    }
    facets.sort_by(|a, b| (&a.normal, a.bound).cmp(&(&b.normal, b.bound)));
    facets
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Vertices: points where the tight facet normals span the whole space.
fn find_vertices(points: &[Vec<i64>], facets: &[Facet], d: usize) -> (Vec<usize>, Vec<Vec<i64>>) {
    if d == 0 {
        return (vec![0], vec![points[0].clone()]);
    }
    let mut ids = Vec::new();
    let mut coords = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let tight: Vec<Vec<i64>> = facets
            .iter()
            .filter(|f| dot(&f.normal, p) == f.bound)
            .map(|f| f.normal.clone())
            .collect();
        if rank(&tight, d) == d {
            ids.push(i);
            coords.push(p.clone());
        }
    }
    (ids, coords)
}

fn rank(rows: &[Vec<i64>], n: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    n - integer_kernel(rows, n).len()
}

/// All faces as meet-closures of facets, keyed by their vertex sets.
fn build_face_lattice(vertices: &[Vec<i64>], facets: &[Facet], d: usize) -> Vec<Face> {
    let all: BTreeSet<usize> = (0..vertices.len()).collect();
    let mut seen: BTreeMap<BTreeSet<usize>, ()> = BTreeMap::new();
    let mut queue = vec![all.clone()];
    seen.insert(all, ());
    let facet_vsets: Vec<BTreeSet<usize>> = facets
        .iter()
        .map(|f| {
            (0..vertices.len())
                .filter(|&v| dot(&f.normal, &vertices[v]) == f.bound)
                .collect()
        })
        .collect();
    while let Some(cur) = queue.pop() {
        for fv in &facet_vsets {
            let meet: BTreeSet<usize> = cur.intersection(fv).copied().collect();
            if !meet.is_empty() && !seen.contains_key(&meet) {
                seen.insert(meet.clone(), ());
                queue.push(meet);
            }
        }
    }
    let mut faces: Vec<Face> = seen
        .keys()
        .map(|vset| {
            let vlist: Vec<usize> = vset.iter().copied().collect();
            let diffs: Vec<Vec<i64>> = vlist[1..]
                .iter()
                .map(|&v| {
                    (0..d)
                        .map(|j| vertices[v][j] - vertices[vlist[0]][j])
                        .collect()
                })
                .collect();
            let fdim = rank(&diffs, d);
            let tight: Vec<usize> = (0..facets.len())
                .filter(|&fi| vlist.iter().all(|&v| facet_vsets[fi].contains(&v)))
                .collect();
            Face {
                dim: fdim,
                vertex_ids: vlist,
                tight_facets: tight,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertex_ids).cmp(&(b.dim, &b.vertex_ids)));
    faces
}

fn enumerate_lattice(
    vertices: &[Vec<i64>],
    facets: &[Facet],
    base: &ExponentVector,
    basis: &[Vec<i64>],
) -> (Vec<Vec<i64>>, Vec<ExponentVector>) {
    let d = basis.len();
    if d == 0 {
        return (vec![vec![]], vec![base.clone()]);
    }
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for v in vertices {
        for j in 0..d {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    let mut intr = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        if facets.iter().all(|f| dot(&f.normal, &cur) <= f.bound) {
            intr.push(cur.clone());
        }
        for j in (0..d).rev() {
            cur[j] += 1;
            if cur[j] <= hi[j] {
                continue 'scan;
            }
            cur[j] = lo[j];
        }
        break;
    }
    let mut pairs: Vec<(ExponentVector, Vec<i64>)> = intr
        .into_iter()
        .map(|lam| {
            let mut amb = base.0.clone();
            for (l, b) in lam.iter().zip(basis) {
                for j in 0..amb.len() {
                    amb[j] += l * b[j];
                }
            }
            (ExponentVector(amb), lam)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let amb = pairs.iter().map(|(a, _)| a.clone()).collect();
    let intr = pairs.into_iter().map(|(_, l)| l).collect();
    (intr, amb)
}

fn minimal_face_index(
    z: &[i64],
    facets: &[Facet],
    faces: &[Face],
    vertices: &[Vec<i64>],
) -> usize {
    let tight: BTreeSet<usize> = (0..facets.len())
        .filter(|&fi| dot(&facets[fi].normal, z) == facets[fi].bound)
        .collect();
    // the minimal face's vertices are exactly those tight on all of T(z)
    let vset: BTreeSet<usize> = (0..vertices.len())
        .filter(|&v| {
            tight
                .iter()
                .all(|&fi| dot(&facets[fi].normal, &vertices[v]) == facets[fi].bound)
        })
        .collect();
    faces
        .iter()
        .position(|f| f.vertex_ids.iter().copied().collect::<BTreeSet<_>>() == vset)
        .expect("minimal face present in the lattice")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn legendre_support() -> Vec<ExponentVector> {
        vec![ev(&[0, 2]), ev(&[1, 0]), ev(&[2, 0]), ev(&[3, 0])]
    }

    /// Brute-force hull oracle: a support point is a vertex iff it is not
    /// a rational convex combination of the others (checked by small LP
    /// style enumeration over subsets for these desk-scale fixtures).
    fn hull_oracle_vertices(support: &[ExponentVector]) -> Vec<ExponentVector> {
        use num_rational::Rational64;
        let pts: Vec<Vec<Rational64>> = support
            .iter()
            .map(|p| p.0.iter().map(|&c| Rational64::from_integer(c)).collect())
            .collect();
        let mut vertices = Vec::new();
        'point: for (i, p) in pts.iter().enumerate() {
            // try to express p as a combination of 2- and 3-subsets of others
            let others: Vec<usize> = (0..pts.len()).filter(|&j| j != i).collect();
            for pair in combinations(&others, 2) {
                let (a, b) = (&pts[pair[0]], &pts[pair[1]]);
                // p = a + t(b-a) with t in [0,1]
                let mut t: Option<Rational64> = None;
                let mut ok = true;
                for j in 0..p.len() {
                    let den = b[j] - a[j];
                    let num = p[j] - a[j];
                    if den == Rational64::from_integer(0) {
                        if num != Rational64::from_integer(0) {
                            ok = false;
                            break;
                        }
                    } else {
                        let tj = num / den;
                        match &t {
                            None => t = Some(tj),
                            Some(t0) if *t0 != tj => {
                                ok = false;
                                break;
                            }
                            _ => {}
                        }
                    }
                }
                if ok {
                    if let Some(t) = t {
                        if t >= Rational64::from_integer(0) && t <= Rational64::from_integer(1) {
                            continue 'point; // on a segment: not a vertex
                        }
                    } else {
                        continue 'point; // equal to another point
                    }
                }
            }
            for triple in combinations(&others, 3) {
                // solve p = l0 A + l1 B + l2 C, l >= 0, sum = 1 (2-d case)
                if p.len() != 2 {
                    continue;
                }
                let (a, b, c) = (&pts[triple[0]], &pts[triple[1]], &pts[triple[2]]);
                let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
                if det == Rational64::from_integer(0) {
                    continue;
                }
                let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
                let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
                let l0 = Rational64::from_integer(1) - l1 - l2;
                let zero = Rational64::from_integer(0);
                if l0 >= zero && l1 >= zero && l2 >= zero {
                    continue 'point;
                }
            }
            vertices.push(support[i].clone());
        }
        vertices.sort();
        vertices
    }

    #[test]
    fn legendre_hull_matches_oracle() {
        let p = NewtonPolytope::from_support(&legendre_support()).unwrap();
        let mut vs = p.vertices().to_vec();
        vs.sort();
        assert_eq!(vs, hull_oracle_vertices(&legendre_support()));
        assert_eq!(vs, vec![ev(&[0, 2]), ev(&[1, 0]), ev(&[3, 0])]);
        assert_eq!(p.intrinsic_dim(), 2);
        assert_eq!(p.interior_lattice_points(), vec![ev(&[1, 1])]);
    }

    #[test]
    fn segment_and_point() {
        let p = NewtonPolytope::from_support(&[ev(&[0]), ev(&[1])]).unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert_eq!(p.intrinsic_dim(), 1);
        assert_eq!(p.lattice_points(), &[ev(&[0]), ev(&[1])]);

        let q = NewtonPolytope::from_support(&[ev(&[2, 3])]).unwrap();
        assert_eq!(q.intrinsic_dim(), 0);
        assert_eq!(q.vertices(), &[ev(&[2, 3])]);
        assert_eq!(q.interior_lattice_points(), vec![ev(&[2, 3])]);
    }

    #[test]
    fn unit_square_regions() {
        let sq = vec![ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[1, 1])];
        let p = NewtonPolytope::from_support(&sq).unwrap();
        assert!(p.interior_lattice_points().is_empty());
        let r = p.one_vertex_region(&ev(&[0, 0])).unwrap();
        assert_eq!(r.points(), &[ev(&[0, 0])]);
        let full = p.full_region();
        assert_eq!(full.points().len(), 4);
    }

    #[test]
    fn one_vertex_region_invalid_on_triangle() {
        let p = NewtonPolytope::from_support(&legendre_support()).unwrap();
        match p.one_vertex_region(&ev(&[1, 0])) {
            Err(Error::InvalidRegion(_)) => {}
            other => panic!("expected InvalidRegion, got {other:?}"),
        }
    }

    #[test]
    fn one_vertex_region_segment() {
        let p = NewtonPolytope::from_support(&[ev(&[0]), ev(&[1])]).unwrap();
        let r = p.one_vertex_region(&ev(&[1])).unwrap();
        assert_eq!(r.points(), &[ev(&[1])]);
    }

    #[test]
    fn level_regions_of_degenerate_cubic() {
        // f = y^2 + t x^3 + x y + x support
        let sup = vec![ev(&[0, 2]), ev(&[3, 0]), ev(&[1, 1]), ev(&[1, 0])];
        let p = NewtonPolytope::from_support(&sup).unwrap();
        let l0 = p.level_region(0).unwrap();
        assert_eq!(l0.points(), &[ev(&[1, 1])]);
        let l1 = p.level_region(1).unwrap();
        assert_eq!(l1.points(), &[ev(&[2, 0]), ev(&[1, 1])]);
        let l2 = p.level_region(2).unwrap();
        assert_eq!(
            l2.points(),
            &[ev(&[0, 2]), ev(&[1, 0]), ev(&[3, 0]), ev(&[2, 0]), ev(&[1, 1])]
        );
        assert!(p.level_region(3).is_err());
    }

    #[test]
    fn level_union_partitions_lattice() {
        let sup = legendre_support();
        let p = NewtonPolytope::from_support(&sup).unwrap();
        let full: BTreeSet<_> = p.lattice_points().iter().cloned().collect();
        let l2: BTreeSet<_> = p.level_region(2).unwrap().points().iter().cloned().collect();
        assert_eq!(full, l2);
        // class counts: codim l points = level(l) minus level(l-1)
        let mut counted = 0;
        for l in 0..=p.intrinsic_dim() {
            let cur = p.level_region(l).unwrap().points().len();
            let prev = if l == 0 {
                0
            } else {
                p.level_region(l - 1).unwrap().points().len()
            };
            assert!(cur >= prev);
            counted = cur;
        }
        assert_eq!(counted, full.len());
    }

    #[test]
    fn cone_membership_examples() {
        let p = NewtonPolytope::from_support(&legendre_support()).unwrap();
        assert!(p.cone_contains(2, &ev(&[2, 2])));
        assert!(!p.cone_contains(1, &ev(&[5, 5])));
        assert!(p.cone_contains(0, &ev(&[0, 0])));
        assert!(!p.cone_contains(0, &ev(&[1, 0])));
    }

    #[test]
    fn hull_idempotence() {
        for sup in [
            legendre_support(),
            vec![ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[1, 1])],
            vec![ev(&[0, 2]), ev(&[3, 0]), ev(&[1, 1]), ev(&[1, 0])],
        ] {
            let p = NewtonPolytope::from_support(&sup).unwrap();
            let q = NewtonPolytope::from_support(p.vertices()).unwrap();
            assert_eq!(p.vertices(), q.vertices());
            assert_eq!(p.facets(), q.facets());
            assert_eq!(p.lattice_points(), q.lattice_points());
        }
    }

    #[test]
    fn separating_functional_property() {
        // m v - u lies outside (m-1)Δ whenever v is on a face avoiding u
        let sup = vec![ev(&[0, 2]), ev(&[3, 0]), ev(&[1, 1]), ev(&[1, 0])];
        let p = NewtonPolytope::from_support(&sup).unwrap();
        for m in [2u64, 3, 5, 7] {
            for (fi, face) in p.faces().iter().enumerate() {
                if face.dim == p.intrinsic_dim() {
                    continue;
                }
                for v in p.lattice_points() {
                    if !p.face_contains(fi, v) {
                        continue;
                    }
                    for u in p.lattice_points() {
                        if p.face_contains(fi, u) {
                            continue;
                        }
                        let e = v.scale(m as i64).sub(u);
                        assert!(
                            !p.cone_contains(m - 1, &e),
                            "m={m} v={v} u={u} face {fi}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lower_dimensional_polytope_lattice() {
        // segment from (0,0) to (2,2): intrinsic dim 1, saturated lattice
        // must include the midpoint (1,1)
        let p = NewtonPolytope::from_support(&[ev(&[0, 0]), ev(&[2, 2])]).unwrap();
        assert_eq!(p.intrinsic_dim(), 1);
        assert_eq!(
            p.lattice_points(),
            &[ev(&[0, 0]), ev(&[1, 1]), ev(&[2, 2])]
        );
        assert_eq!(p.interior_lattice_points(), vec![ev(&[1, 1])]);
    }

    #[test]
    fn dimension_guard() {
        let bad = ExponentVector::from(vec![0i64; 5]);
        assert!(NewtonPolytope::from_support(&[bad]).is_err());
    }
}
