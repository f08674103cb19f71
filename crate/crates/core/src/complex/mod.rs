//! The well-rounded retracts `W_2` (Serre tree) and `W_3` (Soulé complex) as
//! combinatorial complexes whose cells are keyed by their decorations.
//!
//! A decoration is the set of minimal vectors modulo sign shared by every form
//! in the cell. In `W_m` a cell with `k` decorating vectors has dimension
//! `m(m+1)/2 - k`; face relations reverse inclusion of decorations.

pub mod distance;
pub mod serre;
pub mod soule;

use std::array;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intvec::{self, IntVec, OrderKey, SignClass};

pub use distance::{distance_fixpoint, naive_string_distance, DistanceRecord};
pub use soule::{
    cubes_at_cell, faces_of_cube, fundamental_cube, gamma_act, minimal_cube, subcells_of_cube,
    xi_set, Cube, FaceKind, SubcellCensus, XiSet,
};

/// Sorted, duplicate-free set of sign classes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Decoration<const M: usize>(Vec<SignClass<M>>);

impl<const M: usize> Decoration<M> {
    pub fn new(mut classes: Vec<SignClass<M>>) -> Self {
        classes.sort_unstable();
        classes.dedup();
        Self(classes)
    }

    /// Canonicalise arbitrary primitive vectors.
    pub fn from_vectors(vs: &[IntVec<M>]) -> Result<Self> {
        Ok(Self::new(vs.iter().map(IntVec::canon).collect::<Result<_>>()?))
    }

    pub fn classes(&self) -> &[SignClass<M>] {
        &self.0
    }

    pub fn reps(&self) -> Vec<IntVec<M>> {
        self.0.iter().map(SignClass::rep).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: &SignClass<M>) -> bool {
        self.0.binary_search(c).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|c| other.contains(c))
    }

    /// Ascending preorder keys; comparing these compares the collections.
    pub fn sorted_keys(&self) -> Vec<OrderKey<M>> {
        intvec::sorted_keys(&self.reps())
    }

    /// All `Z`-bases of `Z^M` contained in the decoration.
    pub fn basis_subsets(&self) -> Vec<Decoration<M>> {
        let reps = self.reps();
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..M).collect();
        let n = reps.len();
        if n < M {
            return out;
        }
        loop {
            let cols: [IntVec<M>; M] = array::from_fn(|i| reps[idx[i]]);
            if intvec::det(&cols).abs() == 1 {
                out.push(Decoration(idx.iter().map(|&i| self.0[i]).collect()));
            }
            // next combination
            let mut i = M;
            while i > 0 && idx[i - 1] == n - M + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..M {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out
    }
}

impl<const M: usize> fmt::Debug for Decoration<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl<const M: usize> fmt::Display for Decoration<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Total number of decorating vectors of a vertex of `W_M`.
pub const fn vertex_size(m: usize) -> usize {
    m * (m + 1) / 2
}

/// A cell of `W_M`, identified by its decoration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell<const M: usize> {
    decoration: Decoration<M>,
}

impl<const M: usize> Cell<M> {
    pub fn new(decoration: Decoration<M>) -> Result<Self> {
        let k = decoration.len();
        if k < M || k > vertex_size(M) {
            return Err(Error::Domain(format!(
                "decoration of size {k} is not a cell of W_{M}"
            )));
        }
        if decoration.basis_subsets().is_empty() {
            return Err(Error::Domain(format!("{decoration:?} contains no Z-basis")));
        }
        Ok(Self { decoration })
    }

    pub(crate) fn new_unchecked(decoration: Decoration<M>) -> Self {
        Self { decoration }
    }

    pub fn from_vectors(vs: &[IntVec<M>]) -> Result<Self> {
        Self::new(Decoration::from_vectors(vs)?)
    }

    pub fn decoration(&self) -> &Decoration<M> {
        &self.decoration
    }

    pub fn dim(&self) -> usize {
        vertex_size(M) - self.decoration.len()
    }

    /// `self` is a face of `other` (possibly equal).
    pub fn is_face_of(&self, other: &Self) -> bool {
        other.decoration.is_subset(&self.decoration)
    }
}

impl<const M: usize> fmt::Debug for Cell<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.decoration, f)
    }
}

impl<const M: usize> fmt::Display for Cell<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.decoration, f)
    }
}

/// An element of `GL_M(Z)`, stored by columns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaElt<const M: usize> {
    cols: [IntVec<M>; M],
}

impl<const M: usize> GammaElt<M> {
    pub fn from_cols(cols: [IntVec<M>; M]) -> Result<Self> {
        let d = intvec::det(&cols);
        if d.abs() != 1 {
            return Err(Error::Domain(format!("determinant {d} is not ±1")));
        }
        Ok(Self { cols })
    }

    /// Row-major constructor, matching how matrices are written down.
    pub fn from_rows(rows: [[i64; M]; M]) -> Result<Self> {
        Self::from_cols(array::from_fn(|c| IntVec(array::from_fn(|r| rows[r][c]))))
    }

    pub fn identity() -> Self {
        Self { cols: array::from_fn(IntVec::unit) }
    }

    pub fn cols(&self) -> &[IntVec<M>; M] {
        &self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.cols[c].0[r]
    }

    pub fn rows(&self) -> [[i64; M]; M] {
        array::from_fn(|r| array::from_fn(|c| self.entry(r, c)))
    }

    pub fn det(&self) -> i64 {
        intvec::det(&self.cols) as i64
    }

    pub fn apply(&self, v: &IntVec<M>) -> IntVec<M> {
        let mut out = [0i64; M];
        for (c, &x) in v.0.iter().enumerate() {
            if x != 0 {
                for (o, &g) in out.iter_mut().zip(self.cols[c].0.iter()) {
                    *o += g * x;
                }
            }
        }
        IntVec(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { cols: other.cols.map(|c| self.apply(&c)) }
    }

    pub fn inverse(&self) -> Self {
        // Adjugate over the integers; det = ±1.
        let d = self.det();
        let minor = |skip_r: usize, skip_c: usize| -> i64 {
            let rows: Vec<usize> = (0..M).filter(|&r| r != skip_r).collect();
            let cols: Vec<usize> = (0..M).filter(|&c| c != skip_c).collect();
            match M {
                1 => 1,
                2 => self.entry(rows[0], cols[0]),
                3 => {
                    self.entry(rows[0], cols[0]) * self.entry(rows[1], cols[1])
                        - self.entry(rows[0], cols[1]) * self.entry(rows[1], cols[0])
                }
                _ => unimplemented!("inverse only for M <= 3"),
            }
        };
        // inv[r][c] = (-1)^{r+c} minor(c, r) / d
        let cols = array::from_fn(|c| {
            IntVec(array::from_fn(|r| {
                let s = if (r + c) % 2 == 0 { 1 } else { -1 };
                s * minor(c, r) * d
            }))
        });
        Self { cols }
    }

    /// All signed permutation matrices.
    pub fn signed_permutations() -> Vec<Self> {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..M {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..M)
                        .filter(|i| !p.contains(i))
                        .map(|i| {
                            let mut q = p.clone();
                            q.push(i);
                            q
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        let mut out = Vec::new();
        for p in perms {
            for signs in 0..(1u32 << M) {
                let cols = array::from_fn(|c| {
                    let s = if signs & (1 << c) != 0 { -1 } else { 1 };
                    IntVec::unit(p[c]).scale(s)
                });
                out.push(Self { cols });
            }
        }
        out
    }

    pub fn act(&self, cell: &Cell<M>) -> Cell<M> {
        let reps: Vec<IntVec<M>> = cell.decoration.reps().iter().map(|v| self.apply(v)).collect();
        Cell::new_unchecked(
            Decoration::from_vectors(&reps).expect("unimodular images of primitive vectors"),
        )
    }
}

impl<const M: usize> fmt::Debug for GammaElt<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl<const M: usize> Serialize for GammaElt<M> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<i64>> = self.rows().iter().map(|r| r.to_vec()).collect();
        rows.serialize(s)
    }
}

impl<'de, const M: usize> Deserialize<'de> for GammaElt<M> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        if rows.len() != M || rows.iter().any(|r| r.len() != M) {
            return Err(D::Error::custom(format!("expected {M}x{M} integer matrix")));
        }
        let arr = array::from_fn(|r| array::from_fn(|c| rows[r][c]));
        GammaElt::from_rows(arr).map_err(D::Error::custom)
    }
}

/// Parse `"a,b,c;d,e,f;..."` into vectors.
pub fn parse_vectors<const M: usize>(s: &str) -> Result<Vec<IntVec<M>>> {
    s.split(';')
        .map(|part| {
            let xs: Vec<i64> = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
                        .parse::<i64>()
                        .map_err(|_| Error::Domain(format!("bad integer in {part:?}")))
                })
                .collect::<Result<_>>()?;
            let arr: [i64; M] = xs
                .try_into()
                .map_err(|_| Error::Domain(format!("expected {M} entries in {part:?}")))?;
            Ok(IntVec(arr))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_dimensions() {
        let e: Vec<IntVec<3>> = (0..3).map(IntVec::unit).collect();
        assert_eq!(Cell::from_vectors(&e).unwrap().dim(), 3);
        let mut hex = e.clone();
        hex.push(IntVec([0, 1, -1]));
        assert_eq!(Cell::from_vectors(&hex).unwrap().dim(), 2);
        let arc = Cell::<2>::from_vectors(&[IntVec([1, 0]), IntVec([1, 1])]).unwrap();
        assert_eq!(arc.dim(), 1);
        assert!(Cell::<3>::from_vectors(&[IntVec([1, 0, 0]), IntVec([0, 1, 0])]).is_err());
        assert!(Cell::<3>::from_vectors(&[IntVec([1, 0, 0]), IntVec([0, 1, 0]), IntVec([1, 1, 0])]).is_err());
    }

    #[test]
    fn gamma_group_ops() {
        let g = GammaElt::<3>::from_rows([[1, 4, 2], [0, 1, 1], [0, 0, 1]]).unwrap();
        assert_eq!(g.mul(&g.inverse()), GammaElt::identity());
        assert_eq!(g.inverse().mul(&g), GammaElt::identity());
        let r = GammaElt::<2>::from_rows([[0, -1], [1, 0]]).unwrap();
        assert_eq!(r.mul(&r.inverse()), GammaElt::identity());
        assert_eq!(GammaElt::<3>::signed_permutations().len(), 48);
        assert!(GammaElt::<2>::from_rows([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn rotation_on_arc() {
        let r = GammaElt::<2>::from_rows([[0, -1], [1, 0]]).unwrap();
        let arc = Cell::<2>::from_vectors(&[IntVec([1, 0]), IntVec([1, 1])]).unwrap();
        let want = Cell::<2>::from_vectors(&[IntVec([0, 1]), IntVec([1, -1])]).unwrap();
        assert_eq!(r.act(&arc), want);
    }

    #[test]
    fn vector_parsing() {
        let vs = parse_vectors::<3>("1,0,0; (0,1,-1);0,0,1").unwrap();
        assert_eq!(vs[1], IntVec([0, 1, -1]));
        assert!(parse_vectors::<3>("1,0").is_err());
    }
}
