//! The barycentric subdivision `𝒞` of a Soulé cube.
//!
//! A flag `(o, F, E, V)` of the cube (a 2-face, one of its edges, one of the
//! edge's endpoints) spans the tetrahedron on the barycenters of the four
//! cells; the 96 flags tile the cube. Every cube carries the same local
//! model in its own chart, and the 24 monomial symmetries of the fundamental
//! cube permute the tetrahedra in four orbits. A `𝒞`-cell is named by a
//! representative face of the four chosen fundamental tetrahedra together
//! with a lattice element carrying it into place.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use super::geom::{self, Pt};
use crate::complex::soule::{local_model, Cube, LocalMask};
use crate::complex::GammaElt;
use crate::error::{Error, Result};
use crate::intvec::IntVec;
use crate::quadform::{face_vectors, soule_value};
use crate::rational::{int, Rat};

/// Symmetric Gram matrix of a point of `W_3`.
pub type Gram = [[Rat; 3]; 3];

/// Global form of the chart point `x` of the cube with basis `b`.
pub fn gram_of(b: &[IntVec<3>; 3], x: &Pt) -> Result<Gram> {
    let inv = crate::quadform::integer_inverse(b)?;
    let q = chart_matrix(x);
    // G = inv^T Q inv
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| bilinear(&q, &inv[i], &inv[j]))
    }))
}

fn chart_matrix(x: &Pt) -> Gram {
    let two = int(2);
    [
        [two.clone(), x[2].clone(), x[1].clone()],
        [x[2].clone(), two.clone(), x[0].clone()],
        [x[1].clone(), x[0].clone(), two],
    ]
}

fn bilinear(g: &Gram, a: &IntVec<3>, b: &IntVec<3>) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..3 {
        if a.0[i] == 0 {
            continue;
        }
        for j in 0..3 {
            if b.0[j] != 0 {
                acc += &g[i][j] * int(a.0[i] * b.0[j]);
            }
        }
    }
    acc
}

/// Chart coordinates of a global form in the cube with basis `b`, if the
/// form lies in that cube's closure.
pub fn chart_of(b: &[IntVec<3>; 3], g: &Gram) -> Option<Pt> {
    let two = int(2);
    let q: Gram = std::array::from_fn(|i| std::array::from_fn(|j| bilinear(g, &b[i], &b[j])));
    if (0..3).any(|i| q[i][i] != two) {
        return None;
    }
    let x = [q[1][2].clone(), q[0][2].clone(), q[0][1].clone()];
    crate::quadform::in_fundamental_cube(&x).then_some(x)
}

/// Local face mask of a chart point: the face vectors taking the value 2.
pub fn point_mask(x: &Pt) -> LocalMask {
    let two = int(2);
    face_vectors()
        .iter()
        .enumerate()
        .filter(|(_, f)| soule_value(f, x) == two)
        .fold(0, |m, (k, _)| m | (1 << k))
}

#[derive(Clone, Debug, Serialize)]
pub struct CVertex {
    #[serde(with = "crate::rational::rat_array")]
    pub coords: Pt,
    /// Local face whose barycenter this is; `None` for the cube center.
    pub local: Option<usize>,
    /// Dimension of that face (3 for the center).
    pub dim: usize,
}

/// A flag tetrahedron `(o, F_c, E_m, V)`.
#[derive(Clone, Debug)]
pub struct CTet {
    pub verts: [usize; 4],
    /// Bit of the 2-face `F`.
    pub face_bit: usize,
    /// Local index of the edge `E`.
    pub edge: usize,
    /// Local index of the vertex `V`.
    pub vertex: usize,
    bary: [[Rat; 3]; 3],
    bary_f: [[f64; 3]; 3],
}

/// A symmetry of the fundamental cube acting on its chart.
#[derive(Clone, Debug)]
pub struct Stab {
    pub gamma: GammaElt<3>,
    /// Linear chart map `x ↦ A x`.
    pub mat: [[i64; 3]; 3],
    /// Induced permutation of `𝒞`-vertices.
    pub vperm: Vec<usize>,
}

impl Stab {
    pub fn apply(&self, x: &Pt) -> Pt {
        std::array::from_fn(|i| (0..3).map(|j| int(self.mat[i][j]) * &x[j]).sum())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogueCell {
    pub id: usize,
    pub dim: usize,
    /// `𝒞`-vertex indices in the fundamental chart, ascending.
    pub verts: Vec<usize>,
}

/// Where a simplex of the local model sits relative to the catalogue.
#[derive(Clone, Copy, Debug)]
struct Placement {
    cat: usize,
    stab: usize,
}

pub struct Subdivision {
    pub vertices: Vec<CVertex>,
    pub tets: Vec<CTet>,
    pub stabiliser: Vec<Stab>,
    /// Orbit of each tetrahedron under the stabiliser.
    pub tet_orbit: Vec<usize>,
    /// One tetrahedron per orbit, pairwise linked through shared 2-faces.
    pub fundamental: Vec<usize>,
    pub catalogue: Vec<CatalogueCell>,
    placements: HashMap<Vec<usize>, Placement>,
    faces_by_dim: [Vec<Vec<usize>>; 4],
}

/// `𝒞`-vertex index of a local face.
pub fn cvertex_of_local(local: usize) -> usize {
    local + 1
}

pub const CENTER: usize = 0;

impl Subdivision {
    fn build() -> Self {
        let model = local_model();
        let mut vertices = vec![CVertex { coords: geom::origin(), local: None, dim: 3 }];
        for (i, f) in model.faces.iter().enumerate() {
            let pts: Vec<Pt> = f.vertices.iter().map(|&v| model.vertex_coords[v].clone()).collect();
            vertices.push(CVertex { coords: geom::centroid(&pts), local: Some(i), dim: f.dim });
        }
        let mut tets = Vec::new();
        for bit in 0..10 {
            let fi = model.face_index(1 << bit).expect("2-face");
            for (ei, e) in model.faces_of_dim(1) {
                if e.mask & (1 << bit) == 0 {
                    continue;
                }
                for (vi, v) in model.faces_of_dim(0) {
                    if v.mask & e.mask != e.mask {
                        continue;
                    }
                    let verts = [CENTER, cvertex_of_local(fi), cvertex_of_local(ei), cvertex_of_local(vi)];
                    let p: Vec<&Pt> = verts.iter().map(|&k| &vertices[k].coords).collect();
                    let cols = [geom::sub(p[1], p[0]), geom::sub(p[2], p[0]), geom::sub(p[3], p[0])];
                    let bary = invert_cols(&cols).expect("flag tetrahedra are non-degenerate");
                    let bary_f = bary.clone().map(|r| r.map(|x| crate::rational::to_f64(&x)));
                    tets.push(CTet { verts, face_bit: bit, edge: ei, vertex: vi, bary, bary_f });
                }
            }
        }
        let stabiliser = build_stabiliser(&vertices);
        let mut sub = Self {
            vertices,
            tets,
            stabiliser,
            tet_orbit: Vec::new(),
            fundamental: Vec::new(),
            catalogue: Vec::new(),
            placements: HashMap::new(),
            faces_by_dim: Default::default(),
        };
        sub.build_orbits();
        sub
    }

    fn image(&self, g: usize, s: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&i| self.stabiliser[g].vperm[i]).collect();
        v.sort_unstable();
        v
    }

    fn build_orbits(&mut self) {
        let key = |s: &Self, t: &[usize]| -> Vec<usize> {
            (0..s.stabiliser.len()).map(|g| s.image(g, t)).min().expect("nonempty group")
        };
        let tet_sets: Vec<Vec<usize>> = self.tets.iter().map(|t| sorted(&t.verts)).collect();
        let mut orbit_keys: Vec<Vec<usize>> = Vec::new();
        for t in &tet_sets {
            let k = key(self, t);
            let id = match orbit_keys.iter().position(|x| *x == k) {
                Some(i) => i,
                None => {
                    orbit_keys.push(k);
                    orbit_keys.len() - 1
                }
            };
            self.tet_orbit.push(id);
        }
        // grow a face-connected set of orbit representatives from tetrahedron 0
        let n_orbits = orbit_keys.len();
        let mut chosen = vec![0usize];
        let mut have = vec![false; n_orbits];
        have[self.tet_orbit[0]] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for (u, set) in tet_sets.iter().enumerate() {
                let shared = set.iter().filter(|x| tet_sets[t].contains(x)).count();
                if shared == 3 && !have[self.tet_orbit[u]] {
                    have[self.tet_orbit[u]] = true;
                    chosen.push(u);
                    queue.push_back(u);
                }
            }
        }
        self.fundamental = chosen;
        // catalogue of faces of the fundamental tetrahedra up to symmetry
        let mut cat_keys: HashMap<Vec<usize>, usize> = HashMap::new();
        for &t in &self.fundamental.clone() {
            for s in subsets(&tet_sets[t]) {
                let k = key(self, &s);
                if let std::collections::hash_map::Entry::Vacant(e) = cat_keys.entry(k) {
                    let id = self.catalogue.len();
                    e.insert(id);
                    self.catalogue.push(CatalogueCell { id, dim: s.len() - 1, verts: s });
                }
            }
        }
        let mut all_faces: HashMap<Vec<usize>, ()> = HashMap::new();
        for t in &tet_sets {
            for s in subsets(t) {
                all_faces.insert(s, ());
            }
        }
        for s in all_faces.keys() {
            let cat = cat_keys[&key(self, s)];
            let target = &self.catalogue[cat].verts;
            let stab = (0..self.stabiliser.len())
                .find(|&g| self.image(g, s) == *target)
                .expect("orbit representative");
            self.placements.insert(s.clone(), Placement { cat, stab });
        }
        let mut faces_by_dim: [Vec<Vec<usize>>; 4] = Default::default();
        for s in all_faces.into_keys() {
            faces_by_dim[s.len() - 1].push(s);
        }
        for f in &mut faces_by_dim {
            f.sort();
        }
        self.faces_by_dim = faces_by_dim;
    }

    pub fn coords(&self, v: usize) -> &Pt {
        &self.vertices[v].coords
    }

    pub fn tet_points(&self, t: usize) -> [Pt; 4] {
        self.tets[t].verts.map(|v| self.vertices[v].coords.clone())
    }

    /// All `𝒞`-simplices of one dimension, as ascending vertex lists.
    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        &self.faces_by_dim[dim]
    }

    /// Barycentric coordinates in tetrahedron `t`.
    pub fn bary(&self, t: usize, x: &Pt) -> [Rat; 4] {
        let rel = geom::sub(x, &self.vertices[CENTER].coords);
        let m = &self.tets[t].bary;
        let l: [Rat; 3] = std::array::from_fn(|i| (0..3).map(|j| &m[i][j] * &rel[j]).sum());
        let l0 = int(1) - &l[0] - &l[1] - &l[2];
        [l0, l[0].clone(), l[1].clone(), l[2].clone()]
    }

    fn bary_f(&self, t: usize, x: &[f64; 3]) -> [f64; 4] {
        let m = &self.tets[t].bary_f;
        let l: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| m[i][j] * x[j]).sum());
        [1.0 - l[0] - l[1] - l[2], l[0], l[1], l[2]]
    }

    /// Tetrahedra whose closure contains `x`.
    pub fn tets_containing(&self, x: &Pt) -> Vec<usize> {
        let xf = x.clone().map(|c| crate::rational::to_f64(&c));
        (0..self.tets.len())
            .filter(|&t| self.bary_f(t, &xf).iter().all(|&l| l > -1e-9))
            .filter(|&t| self.bary(t, x).iter().all(|l| !l.is_negative()))
            .collect()
    }

    /// Smallest `𝒞`-simplex containing `x`, as ascending vertex list.
    pub fn carrier(&self, x: &Pt) -> Result<Vec<usize>> {
        let t = *self
            .tets_containing(x)
            .first()
            .ok_or_else(|| Error::Geometry("point outside the cube".into()))?;
        let l = self.bary(t, x);
        Ok(sorted(
            &(0..4)
                .filter(|&i| l[i].is_positive())
                .map(|i| self.tets[t].verts[i])
                .collect::<Vec<_>>(),
        ))
    }

    /// Split `[a, b]` where it crosses tetrahedron boundaries; every piece
    /// comes with the smallest closed `𝒞`-simplex containing it.
    pub fn split_segment(&self, a: &Pt, b: &Pt) -> Result<Vec<(Pt, Pt, Vec<usize>)>> {
        if a == b {
            return Ok(vec![(a.clone(), b.clone(), self.carrier(a)?)]);
        }
        let d = geom::sub(b, a);
        let af = a.clone().map(|c| crate::rational::to_f64(&c));
        let df = d.clone().map(|c| crate::rational::to_f64(&c));
        let mut cuts: Vec<Rat> = vec![int(0), int(1)];
        for t in 0..self.tets.len() {
            // interval of the line inside t, screened in floating point first
            let l0 = self.bary_f(t, &af);
            let end: [f64; 3] = std::array::from_fn(|i| af[i] + df[i]);
            let l1 = self.bary_f(t, &end);
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for i in 0..4 {
                let s = l1[i] - l0[i];
                if s.abs() < 1e-12 {
                    if l0[i] < -1e-9 {
                        hi = -1.0;
                    }
                } else {
                    let z = -l0[i] / s;
                    if s > 0.0 {
                        lo = lo.max(z);
                    } else {
                        hi = hi.min(z);
                    }
                }
            }
            if hi < lo + 1e-7 {
                continue;
            }
            if let Some((lo, hi)) = self.tet_interval(t, a, b) {
                for z in [lo, hi] {
                    if z.is_positive() && z < int(1) {
                        cuts.push(z);
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let p = geom::add(a, &geom::scale(&d, &w[0]));
            let q = geom::add(a, &geom::scale(&d, &w[1]));
            let mid = geom::lerp(&p, &q, &crate::rational::half());
            out.push((p, q, self.carrier(&mid)?));
        }
        Ok(out)
    }

    /// Parameters `s` with `a + s (b - a)` in the closed tetrahedron `t`.
    fn tet_interval(&self, t: usize, a: &Pt, b: &Pt) -> Option<(Rat, Rat)> {
        let la = self.bary(t, a);
        let lb = self.bary(t, b);
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (x, y) in la.iter().zip(&lb) {
            let slope = y - x;
            if slope.is_zero() {
                if x.is_negative() {
                    return None;
                }
                continue;
            }
            let z = -x / &slope;
            if slope.is_positive() {
                if lo.as_ref().is_none_or(|l| z > *l) {
                    lo = Some(z);
                }
            } else if hi.as_ref().is_none_or(|h| z < *h) {
                hi = Some(z);
            }
        }
        let (lo, hi) = (lo?, hi?);
        (lo <= hi).then_some((lo, hi))
    }

    /// Catalogue id, stabiliser index and orientation sign of an oriented
    /// simplex of the local model.
    pub fn place(&self, verts: &[usize]) -> Result<(usize, usize, i64)> {
        let key = sorted(verts);
        let p = self
            .placements
            .get(&key)
            .ok_or_else(|| Error::Geometry(format!("{verts:?} is not a 𝒞-simplex")))?;
        let image: Vec<usize> = verts.iter().map(|&v| self.stabiliser[p.stab].vperm[v]).collect();
        let target = &self.catalogue[p.cat].verts;
        let perm: Vec<usize> = image
            .iter()
            .map(|v| target.iter().position(|w| w == v).expect("same vertex set"))
            .collect();
        Ok((p.cat, p.stab, permutation_sign(&perm)))
    }

    pub fn vertex_by_coords(&self, x: &Pt) -> Option<usize> {
        self.vertices.iter().position(|v| v.coords == *x)
    }

    /// Exact volume check: the flag tetrahedra tile the cube.
    pub fn check_tiling(&self) -> Result<Rat> {
        let mut total = Rat::zero();
        for t in 0..self.tets.len() {
            let p = self.tet_points(t);
            let d = geom::tet_det(&p[0], &p[1], &p[2], &p[3]);
            if d.is_zero() {
                return Err(Error::Geometry(format!("tetrahedron {t} is degenerate")));
            }
            total += d.abs() / int(6);
        }
        let want = polytope_volume();
        if total != want {
            return Err(Error::Geometry(format!("volumes {total} and {want} differ")));
        }
        // distinct interiors: no centroid lies in a second tetrahedron
        for t in 0..self.tets.len() {
            let c = geom::centroid(&self.tet_points(t));
            let n = self.tets_containing(&c).len();
            if n != 1 {
                return Err(Error::Geometry(format!("centroid of {t} lies in {n} tetrahedra")));
            }
        }
        Ok(total)
    }
}

/// Volume of the cube as a union of pyramids from the center over its
/// 2-faces, each face fanned from its first vertex.
fn polytope_volume() -> Rat {
    let model = local_model();
    let o = geom::origin();
    let mut vol = Rat::zero();
    for bit in 0..10 {
        let f = &model.faces[model.face_index(1 << bit).expect("2-face")];
        let pts = cyclic_order(&f.vertices.iter().map(|&v| model.vertex_coords[v].clone()).collect::<Vec<_>>());
        for k in 1..pts.len() - 1 {
            vol += geom::tet_det(&o, &pts[0], &pts[k], &pts[k + 1]).abs() / int(6);
        }
    }
    vol
}

/// Order the vertices of a convex polygon around its boundary.
fn cyclic_order(pts: &[Pt]) -> Vec<Pt> {
    let mut out = vec![pts[0].clone()];
    let mut rest: Vec<Pt> = pts[1..].to_vec();
    let normal = {
        let c = geom::centroid(pts);
        let mut n = geom::origin();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let m = geom::cross(&geom::sub(&pts[i], &c), &geom::sub(&pts[j], &c));
                if !geom::is_zero(&m) {
                    n = m;
                }
            }
        }
        n
    };
    while !rest.is_empty() {
        let last = out.last().expect("nonempty").clone();
        // next vertex: all others lie on one side of the edge
        let k = (0..rest.len())
            .find(|&k| {
                let e = geom::sub(&rest[k], &last);
                pts.iter().all(|p| !geom::dot(&geom::cross(&e, &geom::sub(p, &last)), &normal).is_negative())
            })
            .expect("convex polygon");
        out.push(rest.remove(k));
    }
    out
}

fn build_stabiliser(vertices: &[CVertex]) -> Vec<Stab> {
    let index: HashMap<Pt, usize> = vertices.iter().enumerate().map(|(i, v)| (v.coords.clone(), i)).collect();
    let mut out = Vec::new();
    for g in GammaElt::<3>::signed_permutations() {
        if g.det() != 1 {
            continue;
        }
        let cols = *g.cols();
        // A e_k = coords of g^T L(e_k) g
        let mut mat = [[0i64; 3]; 3];
        for k in 0..3 {
            let mut x = geom::origin();
            x[k] = int(1);
            let q = chart_matrix(&x);
            let lin: Gram = std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let v = bilinear(&q, &cols[i], &cols[j]);
                    if i == j {
                        v - int(2)
                    } else {
                        v
                    }
                })
            });
            let img = [&lin[1][2], &lin[0][2], &lin[0][1]];
            for i in 0..3 {
                mat[i][k] = img[i].to_integer().try_into().expect("small entries");
            }
        }
        let mut s = Stab { gamma: g, mat, vperm: Vec::new() };
        s.vperm = vertices
            .iter()
            .map(|v| *index.get(&s.apply(&v.coords)).expect("symmetry permutes barycenters"))
            .collect();
        out.push(s);
    }
    out
}

fn invert_cols(cols: &[Pt; 3]) -> Option<[[Rat; 3]; 3]> {
    let d = geom::det3(&cols[0], &cols[1], &cols[2]);
    if d.is_zero() {
        return None;
    }
    // rows of the inverse are cross products of column pairs
    let r0 = geom::cross(&cols[1], &cols[2]);
    let r1 = geom::cross(&cols[2], &cols[0]);
    let r2 = geom::cross(&cols[0], &cols[1]);
    Some([r0, r1, r2].map(|r| r.map(|x| x / &d)))
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn subsets(set: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << set.len()))
        .map(|m| (0..set.len()).filter(|i| m & (1 << i) != 0).map(|i| set[i]).collect())
        .collect()
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut sign = 1;
    let mut seen = vec![false; perm.len()];
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

static SUBDIVISION: Lazy<Subdivision> = Lazy::new(Subdivision::build);

pub fn subdivision() -> &'static Subdivision {
    &SUBDIVISION
}

/// A tetrahedron of `𝒞` placed in a particular cube.
#[derive(Clone, Debug, Serialize)]
pub struct Tetra {
    pub local: usize,
    pub orbit: usize,
    #[serde(with = "pts_serde")]
    pub chart: [Pt; 4],
}

mod pts_serde {
    use super::Pt;
    use serde::Serializer;
    pub fn serialize<S: Serializer, const N: usize>(p: &[Pt; N], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(N))?;
        for x in p {
            let v: Vec<String> = x.iter().map(crate::rational::format_rat).collect();
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// The 96 tetrahedra of `𝒞` in the chart of `cube`, after an exact tiling check.
pub fn triangulate_cube(cube: &Cube) -> Result<Vec<Tetra>> {
    let sub = subdivision();
    sub.check_tiling()?;
    let _ = cube;
    Ok((0..sub.tets.len())
        .map(|t| Tetra { local: t, orbit: sub.tet_orbit[t], chart: sub.tet_points(t) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fundamental_cube;

    #[test]
    fn tiling() {
        let sub = subdivision();
        assert_eq!(sub.vertices.len(), 51);
        assert_eq!(sub.tets.len(), 96);
        assert_eq!(sub.check_tiling().unwrap(), int(22) / int(3));
        assert_eq!(triangulate_cube(&fundamental_cube()).unwrap().len(), 96);
    }

    #[test]
    fn orbits_and_catalogue() {
        let sub = subdivision();
        assert_eq!(sub.stabiliser.len(), 24);
        assert_eq!(sub.fundamental.len(), 4);
        let mut sizes = [0usize; 4];
        for &o in &sub.tet_orbit {
            sizes[o] += 1;
        }
        assert_eq!(sizes, [24; 4]);
        for s in sub.simplices(2) {
            let (cat, g, sign) = sub.place(s).unwrap();
            let img: Vec<usize> = s.iter().map(|&v| sub.stabiliser[g].vperm[v]).collect();
            assert_eq!(sorted(&img), sub.catalogue[cat].verts);
            assert_eq!(sign.abs(), 1);
        }
    }

    #[test]
    fn chart_round_trip() {
        let b = [IntVec([1, 0, 0]), IntVec([4, 1, 0]), IntVec([2, 1, 1])];
        let x = [crate::rational::rat(1, 3), int(0), crate::rational::rat(-1, 2)];
        let g = gram_of(&b, &x).unwrap();
        assert_eq!(chart_of(&b, &g).unwrap(), x);
        for s in &subdivision().stabiliser {
            let bg = [0, 1, 2].map(|c| (0..3).fold(IntVec([0, 0, 0]), |acc, k| acc + b[k].scale(s.gamma.entry(k, c))));
            assert_eq!(chart_of(&bg, &g).unwrap(), s.apply(&x));
        }
    }
}
