//! The Soulé complex `W_3`.
//!
//! The fundamental cube is the set of forms `Q(u,v,w)` whose minimum 2 is
//! attained on `e1, e2, e3`. Its faces are cut out by the ten vectors
//! `e_i ± e_j` and `e1 ± e2 ± e3`; every other cube is the image of the
//! fundamental one under its decorating basis, so the whole face lattice is
//! read off a single local model.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use serde::Serialize;

use super::{Cell, Decoration, GammaElt};
use crate::error::{Error, Result};
use crate::intvec::{IntVec, OrderResult};
use crate::quadform::{self, face_vectors};
use crate::rational::{int, Rat};

/// Bitmask over [`face_vectors`] naming a face of the fundamental cube: the
/// face's decoration is `{e1,e2,e3}` plus the selected vectors.
pub type LocalMask = u16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FaceKind {
    Hexagon,
    Triangle,
}

/// One proper face of the fundamental cube.
#[derive(Clone, Debug)]
pub struct LocalFace {
    pub mask: LocalMask,
    pub dim: usize,
    /// Indices into [`FundamentalCube::vertex_coords`].
    pub vertices: Vec<usize>,
}

/// Combinatorics and chart geometry of the fundamental cube.
#[derive(Debug)]
pub struct FundamentalCube {
    pub vertex_coords: Vec<[Rat; 3]>,
    /// Vertices, then edges, then 2-faces (hexagons before triangles).
    pub faces: Vec<LocalFace>,
}

impl FundamentalCube {
    fn build() -> Self {
        let fv = face_vectors();
        let two = int(2);
        let mut vertex_coords = Vec::new();
        let mut vertex_masks = Vec::new();
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    let p = [int(a), int(b), int(c)];
                    if !quadform::in_fundamental_cube(&p) {
                        continue;
                    }
                    let mask = mask_of(fv.iter().map(|x| quadform::soule_value(x, &p) == two));
                    if mask.count_ones() == 3 {
                        vertex_coords.push(p);
                        vertex_masks.push(mask);
                    }
                }
            }
        }
        let mut faces: Vec<LocalFace> = vertex_masks
            .iter()
            .enumerate()
            .map(|(i, &mask)| LocalFace { mask, dim: 0, vertices: vec![i] })
            .collect();
        let mut edge_masks = BTreeSet::new();
        for i in 0..vertex_masks.len() {
            for j in i + 1..vertex_masks.len() {
                let m = vertex_masks[i] & vertex_masks[j];
                if m.count_ones() == 2 {
                    edge_masks.insert(m);
                }
            }
        }
        let with_vertices = |mask: LocalMask, dim: usize| LocalFace {
            mask,
            dim,
            vertices: (0..vertex_masks.len())
                .filter(|&i| vertex_masks[i] & mask == mask)
                .collect(),
        };
        faces.extend(edge_masks.into_iter().map(|m| with_vertices(m, 1)));
        faces.extend((0..10).map(|k| with_vertices(1 << k, 2)));
        Self { vertex_coords, faces }
    }

    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = (usize, &LocalFace)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim == dim)
    }

    pub fn face_index(&self, mask: LocalMask) -> Option<usize> {
        self.faces.iter().position(|f| f.mask == mask)
    }

    pub fn kind_of_bit(bit: usize) -> FaceKind {
        if bit < 6 {
            FaceKind::Hexagon
        } else {
            FaceKind::Triangle
        }
    }
}

fn mask_of(bits: impl Iterator<Item = bool>) -> LocalMask {
    bits.enumerate()
        .fold(0, |m, (i, b)| if b { m | (1 << i) } else { m })
}

static FUNDAMENTAL: Lazy<FundamentalCube> = Lazy::new(FundamentalCube::build);

pub fn local_model() -> &'static FundamentalCube {
    &FUNDAMENTAL
}

pub fn standard_basis() -> [IntVec<3>; 3] {
    [IntVec::unit(0), IntVec::unit(1), IntVec::unit(2)]
}

/// The cube decorated by `{e1, e2, e3}`.
pub fn fundamental_cube() -> Cube {
    Cube::from_basis(standard_basis()).expect("standard basis")
}

/// A 3-cell together with an ordered decorating basis fixing its chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cube {
    basis: [IntVec<3>; 3],
    cell: Cell<3>,
}

impl Cube {
    pub fn from_basis(basis: [IntVec<3>; 3]) -> Result<Self> {
        let g = GammaElt::from_cols(basis)?;
        let cell = Cell::new_unchecked(Decoration::from_vectors(&basis)?);
        let _ = g;
        Ok(Self { basis, cell })
    }

    /// Chart basis is the canonical representatives in decoration order.
    pub fn from_cell(cell: &Cell<3>) -> Result<Self> {
        if cell.dim() != 3 {
            return Err(Error::Domain(format!("{cell:?} is not a 3-cell")));
        }
        let reps = cell.decoration().reps();
        Self::from_basis([reps[0], reps[1], reps[2]])
    }

    pub fn basis(&self) -> &[IntVec<3>; 3] {
        &self.basis
    }

    pub fn cell(&self) -> &Cell<3> {
        &self.cell
    }

    pub fn gamma(&self) -> GammaElt<3> {
        GammaElt::from_cols(self.basis).expect("basis is unimodular")
    }

    pub fn is_fundamental(&self) -> bool {
        self.cell == *fundamental_cube().cell()
    }

    /// Global decoration of a local face.
    pub fn local_decoration(&self, mask: LocalMask) -> Decoration<3> {
        let g = self.gamma();
        let fv = face_vectors();
        let mut vs: Vec<IntVec<3>> = self.basis.to_vec();
        for (k, x) in fv.iter().enumerate() {
            if mask & (1 << k) != 0 {
                vs.push(g.apply(x));
            }
        }
        Decoration::from_vectors(&vs).expect("images of primitive vectors")
    }

    pub fn local_cell(&self, mask: LocalMask) -> Cell<3> {
        Cell::new_unchecked(self.local_decoration(mask))
    }

    /// All 50 proper faces as (index into the local model, global cell).
    pub fn proper_faces(&self) -> Vec<(usize, Cell<3>)> {
        local_model()
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| (i, self.local_cell(f.mask)))
            .collect()
    }

    /// Local mask of a global face of this cube, if it is one.
    pub fn local_mask_of(&self, face: &Cell<3>) -> Option<LocalMask> {
        let g_inv = self.gamma().inverse();
        let fv = face_vectors();
        let mut mask = 0;
        let basis_classes: Vec<_> = self.cell.decoration().classes().to_vec();
        if !basis_classes.iter().all(|c| face.decoration().contains(c)) {
            return None;
        }
        for c in face.decoration().classes() {
            if basis_classes.contains(c) {
                continue;
            }
            let local = g_inv.apply(&c.rep());
            let k = fv.iter().position(|x| *x == local || *x == -local)?;
            mask |= 1 << k;
        }
        local_model().face_index(mask).map(|_| mask)
    }
}

/// The ten 2-faces of a cube: six hexagons then four triangles.
pub fn faces_of_cube(cube: &Cell<3>) -> Result<Vec<(FaceKind, Cell<3>)>> {
    let c = Cube::from_cell(cube)?;
    Ok((0..10)
        .map(|k| (FundamentalCube::kind_of_bit(k), c.local_cell(1 << k)))
        .collect())
}

/// Kind of a 2-cell: three basis triples for a hexagon, four for a triangle.
pub fn face_kind(face: &Cell<3>) -> Option<FaceKind> {
    if face.dim() != 2 {
        return None;
    }
    match face.decoration().basis_subsets().len() {
        3 => Some(FaceKind::Hexagon),
        4 => Some(FaceKind::Triangle),
        _ => None,
    }
}

/// Cubes whose closure contains `cell`: the `Z`-bases inside its decoration.
pub fn cubes_at_cell(cell: &Cell<3>) -> Vec<Cell<3>> {
    cell.decoration()
        .basis_subsets()
        .into_iter()
        .map(Cell::new_unchecked)
        .collect()
}

/// Counts of the faces of a cube by type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubcellCensus {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub hexagons: usize,
}

pub fn subcells_of_cube(cube: &Cell<3>) -> Result<SubcellCensus> {
    let c = Cube::from_cell(cube)?;
    let faces = c.proper_faces();
    let distinct: HashSet<&Cell<3>> = faces.iter().map(|(_, f)| f).collect();
    if distinct.len() != faces.len() {
        return Err(Error::Integrity(format!("{cube:?} has coinciding faces")));
    }
    let count = |pred: &dyn Fn(&Cell<3>) -> bool| faces.iter().filter(|(_, f)| pred(f)).count();
    Ok(SubcellCensus {
        vertices: count(&|f| f.dim() == 0),
        edges: count(&|f| f.dim() == 1),
        triangles: count(&|f| face_kind(f) == Some(FaceKind::Triangle)),
        hexagons: count(&|f| face_kind(f) == Some(FaceKind::Hexagon)),
    })
}

pub fn gamma_act(g: &GammaElt<3>, cell: &Cell<3>) -> Cell<3> {
    g.act(cell)
}

/// Types of cells in the order of the incidence table rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CellType {
    Vertex,
    Edge,
    Triangle,
    Hexagon,
    Cube,
}

impl CellType {
    pub const ALL: [CellType; 5] = [
        CellType::Vertex,
        CellType::Edge,
        CellType::Triangle,
        CellType::Hexagon,
        CellType::Cube,
    ];

    pub fn of(cell: &Cell<3>) -> Option<Self> {
        match cell.dim() {
            0 => Some(Self::Vertex),
            1 => Some(Self::Edge),
            2 => face_kind(cell).map(|k| match k {
                FaceKind::Triangle => Self::Triangle,
                FaceKind::Hexagon => Self::Hexagon,
            }),
            3 => Some(Self::Cube),
            _ => None,
        }
    }

    fn rank(self) -> usize {
        Self::ALL.iter().position(|&t| t == self).expect("listed")
    }
}

/// All cells of `W_3` that have `cell` as a face, including cubes.
pub fn cofaces(cell: &Cell<3>) -> HashSet<Cell<3>> {
    let mut out = HashSet::new();
    for cube in cubes_at_cell(cell) {
        let c = Cube::from_cell(&cube).expect("basis subset");
        for (_, f) in c.proper_faces() {
            if cell.is_face_of(&f) && f != *cell {
                out.insert(f);
            }
        }
        out.insert(cube);
    }
    out
}

/// Faces of `cell` (excluding itself), read from any cube containing it.
pub fn boundary_cells(cell: &Cell<3>) -> Vec<Cell<3>> {
    let cubes = cubes_at_cell(cell);
    let Some(first) = cubes.first() else {
        return Vec::new();
    };
    let c = Cube::from_cell(first).expect("basis subset");
    let mut out: Vec<Cell<3>> = c
        .proper_faces()
        .into_iter()
        .map(|(_, f)| f)
        .filter(|f| f.is_face_of(cell) && f != cell)
        .collect();
    out.sort();
    out
}

/// The 5×5 incidence table: entry `[i][j]`, `i > j`, counts type-`j` cells in
/// the boundary of a type-`i` cell; `i < j` counts type-`j` cells containing a
/// type-`i` cell. Diagonal entries are `None`.
pub fn incidence_table() -> [[Option<usize>; 5]; 5] {
    let s0 = fundamental_cube();
    let reps: Vec<Cell<3>> = CellType::ALL
        .iter()
        .map(|&t| {
            if t == CellType::Cube {
                return s0.cell().clone();
            }
            s0.proper_faces()
                .into_iter()
                .map(|(_, f)| f)
                .find(|f| CellType::of(f) == Some(t))
                .expect("every type occurs in the fundamental cube")
        })
        .collect();
    let mut table = [[None; 5]; 5];
    for (i, rep) in reps.iter().enumerate() {
        let below = boundary_cells(rep);
        let above = cofaces(rep);
        for (j, &t) in CellType::ALL.iter().enumerate() {
            if i == j {
                continue;
            }
            let n = if t.rank() < i {
                below.iter().filter(|c| CellType::of(c) == Some(t)).count()
            } else {
                above.iter().filter(|c| CellType::of(c) == Some(t)).count()
            };
            table[i][j] = Some(n);
        }
    }
    table
}

/// Minimal cube in the star of `cell` under the collection preorder.
pub fn minimal_cube(cell: &Cell<3>) -> Result<Cell<3>> {
    if cell.dim() == 3 {
        return Ok(cell.clone());
    }
    let mut cubes = cubes_at_cell(cell);
    if cubes.is_empty() {
        return Err(Error::Domain(format!("{cell:?} has no incident cube")));
    }
    cubes.sort_by_cached_key(|c| c.decoration().sorted_keys());
    if cubes.len() > 1 {
        let (a, b) = (&cubes[0], &cubes[1]);
        if crate::intvec::coll_cmp(&a.decoration().reps(), &b.decoration().reps())?
            == OrderResult::Approx
        {
            return Err(Error::Integrity(format!(
                "cubes {a:?} and {b:?} at {cell:?} are not comparable"
            )));
        }
    }
    Ok(cubes.swap_remove(0))
}

/// The minimal set of a cube: proper faces whose minimal cube is another cube.
#[derive(Clone, Debug, Serialize)]
pub struct XiSet {
    pub cube: Cell<3>,
    /// Indices into the local model of the cube's chart.
    #[serde(skip)]
    pub local: Vec<usize>,
    pub vertices: Vec<Cell<3>>,
    pub edges: Vec<Cell<3>>,
    pub faces: Vec<Cell<3>>,
}

impl XiSet {
    pub fn is_empty(&self) -> bool {
        self.local.is_empty()
    }

    pub fn contains_local(&self, idx: usize) -> bool {
        self.local.binary_search(&idx).is_ok()
    }

    /// Bits (into [`face_vectors`]) of 2-faces in the set.
    pub fn face_bits(&self) -> Vec<usize> {
        let model = local_model();
        self.local
            .iter()
            .filter(|&&i| model.faces[i].dim == 2)
            .map(|&i| model.faces[i].mask.trailing_zeros() as usize)
            .collect()
    }

    pub fn all_cells(&self) -> impl Iterator<Item = &Cell<3>> {
        self.vertices.iter().chain(&self.edges).chain(&self.faces)
    }
}

pub fn xi_set(cube: &Cell<3>) -> Result<XiSet> {
    xi_set_with(cube, &mut |c| minimal_cube(c))
}

pub(crate) fn xi_set_with(
    cube: &Cell<3>,
    min_cube: &mut dyn FnMut(&Cell<3>) -> Result<Cell<3>>,
) -> Result<XiSet> {
    let c = Cube::from_cell(cube)?;
    let model = local_model();
    let mut xi = XiSet {
        cube: cube.clone(),
        local: Vec::new(),
        vertices: Vec::new(),
        edges: Vec::new(),
        faces: Vec::new(),
    };
    for (i, face) in c.proper_faces() {
        if min_cube(&face)? != *cube {
            xi.local.push(i);
            match model.faces[i].dim {
                0 => xi.vertices.push(face),
                1 => xi.edges.push(face),
                _ => xi.faces.push(face),
            }
        }
    }
    Ok(xi)
}

/// Thread-safe memo of minimal cubes and minimal sets, keyed by decoration.
/// Inserts are idempotent, so concurrent writers agree.
#[derive(Default)]
pub struct CellStore {
    min_cubes: RwLock<HashMap<Cell<3>, Cell<3>>>,
    xis: RwLock<HashMap<Cell<3>, Arc<XiSet>>>,
}

impl CellStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn minimal_cube(&self, cell: &Cell<3>) -> Result<Cell<3>> {
        if let Some(c) = self.min_cubes.read().expect("poisoned").get(cell) {
            return Ok(c.clone());
        }
        let c = minimal_cube(cell)?;
        self.min_cubes
            .write()
            .expect("poisoned")
            .entry(cell.clone())
            .or_insert_with(|| c.clone());
        Ok(c)
    }

    pub fn xi_set(&self, cube: &Cell<3>) -> Result<Arc<XiSet>> {
        if let Some(x) = self.xis.read().expect("poisoned").get(cube) {
            return Ok(x.clone());
        }
        let xi = Arc::new(xi_set_with(cube, &mut |c| self.minimal_cube(c))?);
        Ok(self
            .xis
            .write()
            .expect("poisoned")
            .entry(cube.clone())
            .or_insert(xi)
            .clone())
    }
}

/// Vertex at which the sixteen listed cubes meet.
pub fn appendix_vertex() -> Cell<3> {
    Cell::from_vectors(&[
        IntVec([1, 0, 0]),
        IntVec([0, 1, 0]),
        IntVec([0, 0, 1]),
        IntVec([1, 0, 1]),
        IntVec([1, 1, 0]),
        IntVec([0, 1, -1]),
    ])
    .expect("vertex decoration")
}

/// The sixteen decorations at [`appendix_vertex`]. The fifth entry is
/// `{e1, e3, -e1-e2}`; with `-e1-e3` in its place the triple would be
/// dependent.
pub fn appendix_listed_triples() -> Vec<[IntVec<3>; 3]> {
    let e1 = IntVec([1, 0, 0]);
    let e2 = IntVec([0, 1, 0]);
    let e3 = IntVec([0, 0, 1]);
    vec![
        [e1, e2, e3],
        [e1, e2, -e2 + e3],
        [e1, e2, e1 + e3],
        [e1, e3, -e2 + e3],
        [e1, e3, -e1 - e2],
        [e2, e3, e1 + e2],
        [e2, e3, e1 + e3],
        [e1, e2 - e3, e1 + e3],
        [e1, e2 - e3, e1 + e2],
        [e1, e1 + e3, -e1 - e2],
        [e2, e2 - e3, -e1 - e2],
        [e2, e2 - e3, -e1 - e3],
        [e2, e1 + e2, -e1 - e3],
        [e3, e2 - e3, -e1 - e3],
        [e3, e2 - e3, -e1 - e2],
        [e3, e1 + e2, -e1 - e3],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(vs: &[[i64; 3]]) -> Cell<3> {
        Cell::from_vectors(&vs.iter().map(|&v| IntVec(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn local_model_counts() {
        let m = local_model();
        assert_eq!(m.faces_of_dim(0).count(), 16);
        assert_eq!(m.faces_of_dim(1).count(), 24);
        assert_eq!(m.faces_of_dim(2).count(), 10);
        for (_, e) in m.faces_of_dim(1) {
            assert_eq!(e.vertices.len(), 2);
        }
        for k in 0..10 {
            let f = &m.faces[m.face_index(1 << k).unwrap()];
            let want = if k < 6 { 6 } else { 3 };
            assert_eq!(f.vertices.len(), want, "face bit {k}");
        }
    }

    #[test]
    fn fundamental_faces() {
        let s0 = fundamental_cube();
        let faces = faces_of_cube(s0.cell()).unwrap();
        assert_eq!(faces.len(), 10);
        let hex = cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 1]]);
        let tri = cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]);
        assert!(faces.contains(&(FaceKind::Hexagon, hex)));
        assert!(faces.contains(&(FaceKind::Triangle, tri)));
        assert_eq!(faces.iter().filter(|(k, _)| *k == FaceKind::Hexagon).count(), 6);
    }

    #[test]
    fn cubes_at_hexagon_and_triangle() {
        let hex = cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 1]]);
        let mut got = cubes_at_cell(&hex);
        got.sort();
        let mut want = vec![
            cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            cell(&[[1, 0, 0], [0, 1, 0], [0, -1, 1]]),
            cell(&[[1, 0, 0], [0, 0, 1], [0, -1, 1]]),
        ];
        want.sort();
        assert_eq!(got, want);
        let tri = cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]);
        assert_eq!(cubes_at_cell(&tri).len(), 4);
    }

    #[test]
    fn census_of_fundamental_cube() {
        let c = subcells_of_cube(fundamental_cube().cell()).unwrap();
        assert_eq!(
            c,
            SubcellCensus { vertices: 16, edges: 24, triangles: 4, hexagons: 6 }
        );
    }

    #[test]
    fn faces_and_local_masks_agree() {
        let cube = Cube::from_basis([IntVec([1, 0, 0]), IntVec([4, 1, 0]), IntVec([2, 1, 1])]).unwrap();
        for (i, f) in cube.proper_faces() {
            assert_eq!(cube.local_mask_of(&f), Some(local_model().faces[i].mask));
        }
    }

    #[test]
    fn minimal_cubes() {
        let hex = cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 1]]);
        assert_eq!(minimal_cube(&hex).unwrap(), *fundamental_cube().cell());
        let v = cell(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [1, 1, 1]]);
        assert_eq!(cubes_at_cell(&v).len(), 16);
        assert_eq!(minimal_cube(&v).unwrap(), *fundamental_cube().cell());
        for (_, f) in fundamental_cube().proper_faces() {
            assert_eq!(minimal_cube(&f).unwrap(), *fundamental_cube().cell());
        }
    }

    #[test]
    fn fundamental_minimal_set_is_empty() {
        assert!(xi_set(fundamental_cube().cell()).unwrap().is_empty());
    }

    #[test]
    fn monomials_stabilise_fundamental_cube() {
        let s0 = fundamental_cube();
        for g in GammaElt::<3>::signed_permutations() {
            assert_eq!(gamma_act(&g, s0.cell()), *s0.cell());
        }
    }
}
