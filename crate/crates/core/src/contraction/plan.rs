//! Per-cube contraction data: the center target `õ`, the tier of every
//! tetrahedron of `𝒞`, and the ordered list of motions that carry the cube
//! onto its minimal set.

use std::collections::BTreeSet;

use serde::Serialize;

use super::geom::{self, Pt};
use super::subdivision::{cvertex_of_local, subdivision, CENTER};
use crate::complex::soule::{local_model, Cube, XiSet};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rat};

/// Which configuration of minimal hexagons fixes `õ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TargetCase {
    /// Three hexagons through one vertex of the cube.
    ThreeAtVertex,
    /// Three hexagons around a triangle.
    ThreeAroundTriangle,
    TwoHexagons,
    OneHexagon,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterTarget {
    pub case: TargetCase,
    /// `𝒞`-vertex index of `õ`.
    pub cvertex: usize,
    #[serde(with = "crate::rational::rat_array")]
    pub coords: Pt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Tier {
    I,
    II,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseKind {
    /// Tier I tetrahedra collapse onto their minimal vertices and `o`.
    Collapse,
    /// Triangle flanked by one minimal hexagon: away from a non-minimal
    /// neighbour's center.
    TriangleGrey,
    /// Triangle flanked by one minimal hexagon: the remaining part.
    TriangleRed,
    /// Triangle flanked by two minimal hexagons.
    TriangleFlanked,
    /// Hexagon tetrahedron next to a Tier III one.
    HexagonAdjacent,
    /// Hexagon tetrahedron with no Tier III neighbour.
    HexagonInner,
    /// Tier III: `o` slides to `õ`.
    Slide,
    /// The fundamental cube: straight to its center.
    Center,
}

impl PhaseKind {
    pub fn stage(self) -> u8 {
        match self {
            PhaseKind::Collapse => 1,
            PhaseKind::Slide | PhaseKind::Center => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Motion {
    /// Simplicial map: each listed simplex's vertices go to the given images
    /// and points follow their barycentric coordinates.
    Hull(Vec<(Vec<usize>, Vec<usize>)>),
    /// Straight rays away from a fixed source.
    Radial(Pt),
    /// Rays from a source varying with the point: in the tetrahedron
    /// `(v1, v2, v3, v4)` a point `v4 + Σ λ_i (v_i - v4)` is pushed away from
    /// `v4 + (λ2 (c1 - v4) + λ3 (c2 - v4)) / (λ2 + λ3)`.
    Bent { tet: [usize; 4], c1: Pt, c2: Pt },
}

#[derive(Clone, Debug)]
pub struct Phase {
    pub kind: PhaseKind,
    /// Closed `𝒞`-simplices (vertex lists) whose points may move.
    pub domain: Vec<Vec<usize>>,
    /// Closed `𝒞`-simplices where moving points stop; their points stay.
    pub target: Vec<Vec<usize>>,
    pub motion: Motion,
}

#[derive(Clone, Debug)]
pub struct CubePlan {
    pub cube: Cube,
    pub level: usize,
    pub target: Option<CenterTarget>,
    pub tiers: Vec<Tier>,
    pub phases: Vec<Phase>,
    /// Local face indices of the minimal set.
    pub xi_local: Vec<usize>,
}

fn face_local(bit: usize) -> usize {
    local_model().face_index(1 << bit).expect("2-face")
}

fn face_cv(bit: usize) -> usize {
    cvertex_of_local(face_local(bit))
}

fn is_hex(bit: usize) -> bool {
    bit < 6
}

/// `𝒞`-triangles `(F_c, E_m, V)` covering a 2-face.
fn face_triangles(bit: usize) -> Vec<Vec<usize>> {
    let sub = subdivision();
    sub.tets
        .iter()
        .filter(|t| t.face_bit == bit)
        .map(|t| vec![t.verts[1], t.verts[2], t.verts[3]])
        .collect()
}

fn tet_simplex(t: usize) -> Vec<usize> {
    subdivision().tets[t].verts.to_vec()
}

fn edge_between(a: usize, b: usize) -> Option<usize> {
    local_model().face_index((1 << a) | (1 << b))
}

fn other_bit(edge_local: usize, bit: usize) -> usize {
    let m = local_model().faces[edge_local].mask & !(1 << bit);
    m.trailing_zeros() as usize
}

fn vertex_with_mask(mask: u16) -> Option<usize> {
    local_model().face_index(mask)
}

/// The point `õ` for a non-fundamental cube, from its minimal 2-faces.
pub fn center_target(xi: &XiSet) -> Result<CenterTarget> {
    let model = local_model();
    let sub = subdivision();
    check_closure(xi)?;
    let bits = xi.face_bits();
    let hexes: Vec<usize> = bits.iter().copied().filter(|&b| is_hex(b)).collect();
    let at_local = |local: usize, case| CenterTarget {
        case,
        cvertex: cvertex_of_local(local),
        coords: sub.coords(cvertex_of_local(local)).clone(),
    };
    match hexes.len() {
        1 => Ok(at_local(face_local(hexes[0]), TargetCase::OneHexagon)),
        2 => {
            let edge = edge_between(hexes[0], hexes[1]).ok_or_else(|| {
                Error::Unhandled(format!("{:?}: two minimal hexagons without a common edge", xi.cube))
            })?;
            let ends: Vec<usize> = model.faces_of_dim(0)
                .filter(|(_, v)| v.mask & model.faces[edge].mask == model.faces[edge].mask)
                .filter(|(_, v)| (6..10).any(|t| v.mask & (1 << t) != 0))
                .map(|(i, _)| i)
                .collect();
            match ends.as_slice() {
                [v] => Ok(at_local(*v, TargetCase::TwoHexagons)),
                _ => Err(Error::Unhandled(format!(
                    "{:?}: {} endpoints of the common edge lie on triangles",
                    xi.cube,
                    ends.len()
                ))),
            }
        }
        3 => {
            // match against the sum and difference patterns under the stabiliser
            let set: BTreeSet<usize> = hexes.iter().map(|&b| face_cv(b)).collect();
            let sums: BTreeSet<usize> = [1, 3, 5].iter().map(|&b| face_cv(b)).collect();
            let diffs: BTreeSet<usize> = [0, 2, 4].iter().map(|&b| face_cv(b)).collect();
            for g in &sub.stabiliser {
                let img: BTreeSet<usize> = set.iter().map(|&v| g.vperm[v]).collect();
                if img == diffs {
                    let mask = hexes.iter().fold(0u16, |m, &b| m | (1 << b));
                    let v = vertex_with_mask(mask).ok_or_else(|| {
                        Error::Integrity("three hexagons of the difference pattern share no vertex".into())
                    })?;
                    return Ok(at_local(v, TargetCase::ThreeAtVertex));
                }
                if img == sums {
                    let t = (6..10)
                        .find(|&t| hexes.iter().all(|&h| edge_between(t, h).is_some()))
                        .ok_or_else(|| Error::Integrity("sum pattern without a central triangle".into()))?;
                    if !bits.contains(&t) {
                        return Err(Error::Unhandled(format!(
                            "{:?}: triangle between three minimal hexagons is not minimal",
                            xi.cube
                        )));
                    }
                    return Ok(at_local(face_local(t), TargetCase::ThreeAroundTriangle));
                }
            }
            Err(Error::Unhandled(format!("{:?}: three hexagons in no known pattern", xi.cube)))
        }
        n => Err(Error::Unhandled(format!("{:?}: {n} minimal hexagons", xi.cube))),
    }
}

/// The minimal set must be the closure of its 2-faces.
fn check_closure(xi: &XiSet) -> Result<()> {
    let model = local_model();
    let bits = xi.face_bits();
    let mut closure: BTreeSet<usize> = BTreeSet::new();
    for (i, f) in model.faces.iter().enumerate() {
        if bits.iter().any(|&b| f.mask & (1 << b) != 0) {
            closure.insert(i);
        }
    }
    let have: BTreeSet<usize> = xi.local.iter().copied().collect();
    if closure != have {
        return Err(Error::Unhandled(format!(
            "{:?}: minimal set is not the closure of its 2-faces",
            xi.cube
        )));
    }
    Ok(())
}

/// Tier of each tetrahedron of `𝒞` given the minimal set and `õ`.
pub fn classify_tiers(xi: &XiSet, target: &CenterTarget) -> Vec<Tier> {
    let sub = subdivision();
    let bits = xi.face_bits();
    let in_face = |bit: usize, cv: usize| -> bool {
        match sub.vertices[cv].local {
            Some(l) => local_model().faces[l].mask & (1 << bit) != 0,
            None => false,
        }
    };
    sub.tets
        .iter()
        .map(|t| {
            let f = t.face_bit;
            if !bits.contains(&f) {
                return Tier::I;
            }
            if !in_face(f, target.cvertex) {
                return Tier::II;
            }
            let g = other_bit(t.edge, f);
            let third = if is_hex(f) {
                is_hex(g) && bits.contains(&g)
            } else {
                target.cvertex == face_cv(f) && is_hex(g) && bits.contains(&g)
            };
            if third {
                Tier::III
            } else {
                Tier::II
            }
        })
        .collect()
}

impl CubePlan {
    pub fn build(cube: &Cube, level: usize, xi: &XiSet, delta: &Rat) -> Result<Self> {
        let sub = subdivision();
        if cube.is_fundamental() {
            return Ok(Self {
                cube: cube.clone(),
                level,
                target: None,
                tiers: vec![Tier::III; sub.tets.len()],
                phases: vec![Phase {
                    kind: PhaseKind::Center,
                    domain: (0..sub.tets.len()).map(tet_simplex).collect(),
                    target: vec![vec![CENTER]],
                    motion: Motion::Hull(
                        (0..sub.tets.len())
                            .map(|t| (tet_simplex(t), vec![CENTER; 4]))
                            .collect(),
                    ),
                }],
                xi_local: Vec::new(),
            });
        }
        let target = center_target(xi)?;
        let tiers = classify_tiers(xi, &target);
        let bits = xi.face_bits();
        let xi_cv: BTreeSet<usize> = xi.local.iter().map(|&l| cvertex_of_local(l)).collect();
        let tets_with = |pred: &dyn Fn(usize) -> bool| -> Vec<usize> {
            (0..sub.tets.len()).filter(|&t| pred(t)).collect()
        };
        let mut phases = Vec::new();

        // Stage I
        let tier1 = tets_with(&|t| tiers[t] == Tier::I);
        let others = tets_with(&|t| tiers[t] != Tier::I);
        if !tier1.is_empty() {
            phases.push(Phase {
                kind: PhaseKind::Collapse,
                domain: tier1.iter().map(|&t| tet_simplex(t)).collect(),
                target: others.iter().map(|&t| tet_simplex(t)).collect(),
                motion: Motion::Hull(
                    tier1
                        .iter()
                        .map(|&t| {
                            let vs = tet_simplex(t);
                            let img = vs
                                .iter()
                                .map(|v| if xi_cv.contains(v) { *v } else { CENTER })
                                .collect();
                            (vs, img)
                        })
                        .collect(),
                ),
            });
        }

        let min_hexes: Vec<usize> = bits.iter().copied().filter(|&b| is_hex(b)).collect();
        let hex_tets: Vec<Vec<usize>> = tets_with(&|t| min_hexes.contains(&sub.tets[t].face_bit))
            .into_iter()
            .map(tet_simplex)
            .collect();

        // Stage II, triangles
        for &tri in bits.iter().filter(|&&b| !is_hex(b)) {
            let tri_tets = tets_with(&|t| sub.tets[t].face_bit == tri && tiers[t] == Tier::II);
            if tri_tets.is_empty() {
                continue;
            }
            let tri_edges: Vec<usize> = local_model()
                .faces_of_dim(1)
                .filter(|(_, e)| e.mask & (1 << tri) != 0)
                .map(|(i, _)| i)
                .collect();
            let neighbours: Vec<(usize, usize)> = tri_edges.iter().map(|&e| (e, other_bit(e, tri))).collect();
            let (minimal, other): (Vec<_>, Vec<_>) = neighbours.iter().partition(|(_, h)| bits.contains(h));
            let tc = face_cv(tri);
            let mut t_target = face_triangles(tri);
            match (minimal.len(), other.as_slice()) {
                (1, [(e1, n1), (e2, n2)]) => {
                    let e_h = minimal[0].0;
                    let p = vertex_with_mask((1 << tri) | (1 << n1) | (1 << n2))
                        .ok_or_else(|| Error::Integrity("no common vertex of the flanking hexagons".into()))?;
                    let n_edge = edge_between(*n1, *n2).ok_or_else(|| Error::Integrity("flanking hexagons meet in no edge".into()))?;
                    let q = *local_model().faces[n_edge]
                        .vertices
                        .iter()
                        .find(|&&v| v != p)
                        .expect("edge has two ends");
                    let pcv = cvertex_of_local(p);
                    let red: Vec<usize> = tri_tets.iter().copied().filter(|&t| sub.tets[t].edge == e_h).collect();
                    let wedge = vec![CENTER, tc, pcv];
                    let mut grey_target = t_target.clone();
                    grey_target.extend(red.iter().map(|&t| tet_simplex(t)));
                    grey_target.push(wedge.clone());
                    for (e, n) in [(e1, n1), (e2, n2)] {
                        let grey: Vec<usize> = tri_tets.iter().copied().filter(|&t| sub.tets[t].edge == *e).collect();
                        phases.push(Phase {
                            kind: PhaseKind::TriangleGrey,
                            domain: grey.iter().map(|&t| tet_simplex(t)).collect(),
                            target: grey_target.clone(),
                            motion: Motion::Radial(sub.coords(face_cv(*n)).clone()),
                        });
                    }
                    let mut domain: Vec<Vec<usize>> = red.iter().map(|&t| tet_simplex(t)).collect();
                    domain.push(wedge);
                    t_target.extend(hex_tets.iter().cloned());
                    phases.push(Phase {
                        kind: PhaseKind::TriangleRed,
                        domain,
                        target: t_target,
                        motion: Motion::Radial(sub.coords(cvertex_of_local(q)).clone()),
                    });
                }
                (2, _) => {
                    let corner = geom::scale(sub.coords(tc), &rat(3, 2));
                    let hc: Vec<&Pt> = minimal.iter().map(|(_, h)| sub.coords(face_cv(*h))).collect();
                    let source = geom::sub(&corner, &geom::scale(&geom::add(hc[0], hc[1]), &int(2)));
                    t_target.extend(hex_tets.iter().cloned());
                    phases.push(Phase {
                        kind: PhaseKind::TriangleFlanked,
                        domain: tri_tets.iter().map(|&t| tet_simplex(t)).collect(),
                        target: t_target,
                        motion: Motion::Radial(source),
                    });
                }
                (n, _) => {
                    return Err(Error::Unhandled(format!(
                        "{:?}: minimal triangle flanked by {n} minimal hexagons with õ outside it",
                        cube.cell()
                    )))
                }
            }
        }

        // Stage II, hexagons
        let shares_face = |a: usize, b: usize| {
            let sa = &sub.tets[a].verts;
            sub.tets[b].verts.iter().filter(|v| sa.contains(v)).count() == 3
        };
        let tier3 = tets_with(&|t| tiers[t] == Tier::III);
        let mut adjacent = Vec::new();
        let mut inner = Vec::new();
        for t in tets_with(&|t| tiers[t] == Tier::II && is_hex(sub.tets[t].face_bit)) {
            let tt = &sub.tets[t];
            let hcv = tt.verts[1];
            let hc = sub.coords(hcv);
            match tier3.iter().copied().find(|&u| shares_face(t, u)) {
                Some(u) => {
                    let x = *tt.verts[1..]
                        .iter()
                        .find(|v| !sub.tets[u].verts.contains(v))
                        .expect("one vertex off the shared face");
                    let c = geom::lerp(sub.coords(CENTER), sub.coords(x), &rat(1, 2));
                    let ct = geom::add(&c, &geom::scale(&geom::sub(&c, hc), delta));
                    let mut target = face_triangles(tt.face_bit);
                    target.push(tet_simplex(u));
                    adjacent.push(Phase {
                        kind: PhaseKind::HexagonAdjacent,
                        domain: vec![tet_simplex(t)],
                        target,
                        motion: Motion::Radial(ct),
                    });
                }
                None => {
                    let [v4, v1, v2, v3] = tt.verts;
                    let tilde = |v: usize| {
                        let c = geom::lerp(sub.coords(v4), sub.coords(v), &rat(1, 2));
                        geom::add(&c, &geom::scale(&geom::sub(&c, hc), delta))
                    };
                    inner.push(Phase {
                        kind: PhaseKind::HexagonInner,
                        domain: vec![tet_simplex(t)],
                        target: vec![vec![v1, v2, v3], vec![v1, v4]],
                        motion: Motion::Bent { tet: [v1, v2, v3, v4], c1: tilde(v2), c2: tilde(v3) },
                    });
                }
            }
        }
        phases.extend(adjacent);
        phases.extend(inner);

        // Stage III
        let mut slide: Vec<(Vec<usize>, Vec<usize>)> = tier3
            .iter()
            .map(|&t| {
                let vs = tet_simplex(t);
                let img = vs.iter().map(|&v| if v == CENTER { target.cvertex } else { v }).collect();
                (vs, img)
            })
            .collect();
        slide.push((vec![CENTER, target.cvertex], vec![target.cvertex, target.cvertex]));
        phases.push(Phase {
            kind: PhaseKind::Slide,
            domain: slide.iter().map(|(s, _)| s.clone()).collect(),
            target: xi.local.iter().filter(|&&l| local_model().faces[l].dim == 2).flat_map(|&l| {
                let bit = local_model().faces[l].mask.trailing_zeros() as usize;
                face_triangles(bit)
            }).collect(),
            motion: Motion::Hull(slide),
        });

        Ok(Self {
            cube: cube.clone(),
            level,
            target: Some(target),
            tiers,
            phases,
            xi_local: xi.local.clone(),
        })
    }

    pub fn in_xi(&self, x: &Pt) -> bool {
        let mask = super::subdivision::point_mask(x);
        mask != 0
            && local_model()
                .face_index(mask)
                .is_some_and(|i| self.xi_local.binary_search(&i).is_ok())
    }
}
