//! Integral chains on `𝒞`.
//!
//! Locally a chain is a map from ascending vertex lists of a cube's chart to
//! coefficients. Globally a term is `(coefficient, γ, catalogue cell)`: the
//! catalogue cell with its ascending vertex order, carried by `γ` from the
//! fundamental chart. Two global chains are compared through the forms at
//! their vertices, which does not depend on the chosen representatives.

use std::collections::BTreeMap;

use num_traits::Zero;
use once_cell::sync::Lazy;
use serde::Serialize;

use super::geom::Pt;
use super::subdivision::{gram_of, permutation_sign, subdivision, Gram};
use crate::complex::GammaElt;
use crate::error::{Error, Result};
use crate::intvec::IntVec;
use crate::rational::Rat;

/// Chain in one chart, keyed by ascending vertex lists.
pub type LocalChain = BTreeMap<Vec<usize>, i64>;

/// Ascending order of an oriented simplex and the sign of the reordering.
pub fn oriented(verts: &[usize]) -> (Vec<usize>, i64) {
    let mut idx: Vec<usize> = (0..verts.len()).collect();
    idx.sort_by_key(|&i| verts[i]);
    let perm: Vec<usize> = idx.clone();
    (idx.iter().map(|&i| verts[i]).collect(), permutation_sign(&perm))
}

pub fn add_simplex(c: &mut LocalChain, verts: &[usize], coeff: i64) {
    if coeff == 0 {
        return;
    }
    let (s, sign) = oriented(verts);
    let e = c.entry(s.clone()).or_insert(0);
    *e += sign * coeff;
    if *e == 0 {
        c.remove(&s);
    }
}

pub fn local_boundary(c: &LocalChain) -> LocalChain {
    let mut out = LocalChain::new();
    for (s, &k) in c {
        if s.len() < 2 {
            continue;
        }
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            add_simplex(&mut out, &f, if i % 2 == 0 { k } else { -k });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub coeff: i64,
    pub gamma: GammaElt<3>,
    /// Catalogue id of the cell.
    pub cell: usize,
    pub dim: usize,
}

/// A symbolic integral chain of `𝒞`-cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FormalChain {
    pub terms: Vec<Term>,
}

/// Upper triangle of a Gram matrix.
pub type GramKey = [Rat; 6];

fn gram_key(g: &Gram) -> GramKey {
    [
        g[0][0].clone(),
        g[0][1].clone(),
        g[0][2].clone(),
        g[1][1].clone(),
        g[1][2].clone(),
        g[2][2].clone(),
    ]
}

/// Boundary of every catalogue cell as `(sign, stabiliser index, face id)`.
static CATALOGUE_FACES: Lazy<Vec<Vec<(i64, usize, usize)>>> = Lazy::new(|| {
    let sub = subdivision();
    sub.catalogue
        .iter()
        .map(|c| {
            if c.verts.len() < 2 {
                return Vec::new();
            }
            (0..c.verts.len())
                .map(|i| {
                    let mut f = c.verts.clone();
                    f.remove(i);
                    let (id, g, s) = sub.place(&f).expect("faces of 𝒞-cells are 𝒞-cells");
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    (sign * s, g, id)
                })
                .collect()
        })
        .collect()
});

impl FormalChain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The cube center `o` of the fundamental cube.
    pub fn base_point() -> Self {
        let sub = subdivision();
        let (cell, _, _) = sub.place(&[super::subdivision::CENTER]).expect("center");
        Self { terms: vec![Term { coeff: 1, gamma: GammaElt::identity(), cell, dim: 0 }] }
    }

    /// `coeff` times the oriented simplex `verts` in the chart of the cube
    /// with basis `basis`.
    pub fn push_local(&mut self, basis: &[IntVec<3>; 3], verts: &[usize], coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        let sub = subdivision();
        let (cell, g, sign) = sub.place(verts)?;
        let gamma = GammaElt::from_cols(*basis)?.mul(&sub.stabiliser[g].gamma);
        self.terms.push(Term { coeff: coeff * sign, gamma, cell, dim: verts.len() - 1 });
        Ok(())
    }

    pub fn extend_local(&mut self, basis: &[IntVec<3>; 3], c: &LocalChain) -> Result<()> {
        for (s, &k) in c {
            self.push_local(basis, s, k)?;
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &FormalChain, k: i64) {
        self.terms.extend(other.terms.iter().map(|t| Term { coeff: t.coeff * k, ..t.clone() }));
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, -1);
        out
    }

    /// Left translate by `h`.
    pub fn translate(&self, h: &GammaElt<3>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term { gamma: h.mul(&t.gamma), ..t.clone() })
                .collect(),
        }
    }

    /// Merge terms with the same representative and drop zeros.
    pub fn normalize(&self) -> Self {
        let mut acc: BTreeMap<(Vec<[i64; 3]>, usize, usize), i64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry((t.gamma.rows().to_vec(), t.cell, t.dim)).or_insert(0) += t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, k)| *k != 0)
            .map(|((rows, cell, dim), coeff)| Term {
                coeff,
                gamma: GammaElt::from_rows([rows[0], rows[1], rows[2]]).expect("stored element"),
                cell,
                dim,
            })
            .collect();
        Self { terms }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.dim).max()
    }

    pub fn boundary(&self) -> Self {
        let sub = subdivision();
        let mut out = Self::zero();
        for t in &self.terms {
            for &(sign, g, id) in &CATALOGUE_FACES[t.cell] {
                out.terms.push(Term {
                    coeff: t.coeff * sign,
                    gamma: t.gamma.mul(&sub.stabiliser[g].gamma),
                    cell: id,
                    dim: t.dim - 1,
                });
            }
        }
        out.normalize()
    }

    /// Oriented vertex forms of each term, merged.
    pub fn global(&self) -> Result<BTreeMap<Vec<GramKey>, i64>> {
        let sub = subdivision();
        let mut out: BTreeMap<Vec<GramKey>, i64> = BTreeMap::new();
        for t in &self.terms {
            let cols = *t.gamma.cols();
            let mut keys = Vec::new();
            for &v in &sub.catalogue[t.cell].verts {
                keys.push(gram_key(&gram_of(&cols, sub.coords(v))?));
            }
            let mut idx: Vec<usize> = (0..keys.len()).collect();
            idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
            let sign = permutation_sign(&idx);
            let sorted: Vec<GramKey> = idx.iter().map(|&i| keys[i].clone()).collect();
            let e = out.entry(sorted.clone()).or_insert(0);
            *e += sign * t.coeff;
            if *e == 0 {
                out.remove(&sorted);
            }
        }
        Ok(out)
    }

    /// Same chain of `W_3` regardless of representatives.
    pub fn equivalent(&self, other: &Self) -> Result<bool> {
        let mut d = self.clone();
        d.add_scaled(other, -1);
        Ok(d.global()?.is_empty())
    }

    /// Vertex forms of a 0-chain supported on one point, if it is `p - q`
    /// style; used for endpoint reports.
    pub fn vertex_forms(&self) -> Result<Vec<(GramKey, i64)>> {
        let g = self.global()?;
        if g.keys().any(|k| k.len() != 1) {
            return Err(Error::Domain("not a 0-chain".into()));
        }
        Ok(g.into_iter().map(|(mut k, c)| (k.remove(0), c)).collect())
    }
}

/// Global form of the point `x` of the cube with basis `basis`.
pub fn global_point(basis: &[IntVec<3>; 3], x: &Pt) -> Result<GramKey> {
    Ok(gram_key(&gram_of(basis, x)?))
}

pub fn is_zero_key(k: &GramKey) -> bool {
    k.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::soule::standard_basis;

    #[test]
    fn boundary_of_boundary_vanishes() {
        let sub = subdivision();
        let mut c = FormalChain::zero();
        for (i, t) in sub.tets.iter().enumerate().take(12) {
            c.push_local(&standard_basis(), &t.verts, i as i64 - 5).unwrap();
        }
        assert!(c.boundary().boundary().global().unwrap().is_empty());
        // interior faces of the positively oriented tiling cancel
        let mut all = FormalChain::zero();
        for i in 0..sub.tets.len() {
            let p = sub.tet_points(i);
            let sign = if crate::contraction::geom::tet_det(&p[0], &p[1], &p[2], &p[3]) > Rat::zero() { 1 } else { -1 };
            all.push_local(&standard_basis(), &sub.tets[i].verts, sign).unwrap();
        }
        assert_eq!(all.boundary().global().unwrap().len(), 96);
    }

    #[test]
    fn representatives_do_not_matter() {
        let sub = subdivision();
        let t = &sub.tets[7].verts;
        let mut a = FormalChain::zero();
        a.push_local(&standard_basis(), t, 1).unwrap();
        // same simplex through a symmetry of the cube
        let g = &sub.stabiliser[5];
        let img: Vec<usize> = t.iter().map(|&v| g.vperm[v]).collect();
        let mut b = FormalChain::zero();
        b.push_local(&standard_basis(), &img, 1).unwrap();
        assert!(a.equivalent(&b.translate(&g.gamma)).unwrap());
    }
}
