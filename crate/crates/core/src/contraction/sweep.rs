//! Exact sweeps of `𝒞`-cells under the contraction.
//!
//! The trajectory of a `𝒞`-vertex is a path of `𝒞`-edges. A `𝒞`-edge is
//! pushed through the phases of its minimal cube as a whole: in each phase
//! every moving edge sweeps a planar region between itself and its image,
//! and the image, again a union of `𝒞`-edges, continues in the next phase
//! or the next cube. The planar regions are filled with `𝒞`-triangles by
//! winding numbers and checked against their boundary loops, so the cone
//! `S(e)` satisfies `∂S(e) = e + T(b) - T(a)` for `e = [a, b]` with `T(x)`
//! the trajectory of `x` as a 1-chain.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::chain::{add_simplex, local_boundary, FormalChain, LocalChain};
use super::geom::{self, Pt};
use super::plan::{Motion, Phase};
use super::subdivision::{chart_of, gram_of, point_mask, subdivision};
use super::trace::{apply_phase, fmt_pt, trace_h3, TraceContext};
use crate::complex::soule::Cube;
use crate::complex::GammaElt;
use crate::error::{Error, Result};
use crate::rational::{half, int, rat, Rat};

fn vertex_at(x: &Pt) -> Result<usize> {
    subdivision()
        .vertex_by_coords(x)
        .ok_or_else(|| Error::Geometry(format!("{} is not a 𝒞-vertex", fmt_pt(x))))
}

/// Trajectory of a `𝒞`-vertex as a 1-chain from the vertex to `o`.
pub fn vertex_track(ctx: &TraceContext, cube: &Cube, x: &Pt) -> Result<FormalChain> {
    let t = trace_h3(ctx, cube, x)?;
    let mut out = FormalChain::zero();
    for p in &t.pieces {
        if p.from == p.to {
            continue;
        }
        let (a, b) = (vertex_at(&p.from)?, vertex_at(&p.to)?);
        let mut want = vec![a, b];
        want.sort_unstable();
        if p.csimplex != want {
            return Err(Error::Geometry(format!(
                "trajectory piece {} -> {} is not a 𝒞-edge",
                fmt_pt(&p.from),
                fmt_pt(&p.to)
            )));
        }
        out.push_local(Cube::from_cell(&p.cube)?.basis(), &[a, b], 1)?;
    }
    Ok(out.normalize())
}

/// `σ(γ)`: the reversed trajectory of `γ·o`, a path from `o` to `γ·o`.
pub fn orbit_path(ctx: &TraceContext, g: &GammaElt<3>) -> Result<FormalChain> {
    let cube = Cube::from_basis(*g.cols())?;
    Ok(vertex_track(ctx, &cube, &geom::origin())?.neg())
}

/// Position of `x` after `phase`.
fn image(phase: &Phase, x: &Pt) -> Result<Pt> {
    Ok(apply_phase(phase, x)?.unwrap_or_else(|| x.clone()))
}

/// Fixed source of the rays moving the open segment `[p, q]`.
fn ray_source(phase: &Phase, p: &Pt, q: &Pt) -> Result<Option<Pt>> {
    match &phase.motion {
        Motion::Hull(_) => Ok(None),
        Motion::Radial(s) => Ok(Some(s.clone())),
        Motion::Bent { tet, c1, c2 } => {
            let sub = subdivision();
            let pts: Vec<Pt> = tet.iter().map(|&v| sub.coords(v).clone()).collect();
            let source_at = |x: &Pt| -> Result<Pt> {
                let l = geom::barycentric(&pts, x).ok_or_else(|| Error::Geometry("outside the bent tetrahedron".into()))?;
                let c = &l[1] + &l[2];
                if c.is_zero() {
                    return Err(Error::Geometry("bent source undefined".into()));
                }
                let v4 = &pts[3];
                Ok(geom::add(
                    v4,
                    &geom::add(
                        &geom::scale(&geom::sub(c1, v4), &(&l[1] / &c)),
                        &geom::scale(&geom::sub(c2, v4), &(&l[2] / &c)),
                    ),
                ))
            };
            let s1 = source_at(&geom::lerp(p, q, &rat(1, 3)))?;
            let s2 = source_at(&geom::lerp(p, q, &rat(2, 3)))?;
            if s1 != s2 {
                return Err(Error::Unhandled(format!(
                    "edge {} -> {} meets a varying ray source",
                    fmt_pt(p),
                    fmt_pt(q)
                )));
            }
            Ok(Some(s1))
        }
    }
}

/// Image polyline of the moving segment `[p, q]`, from the image of `p` to
/// the image of `q`.
fn image_polyline(phase: &Phase, p: &Pt, q: &Pt) -> Result<Vec<Pt>> {
    let sub = subdivision();
    let mut params: Vec<Rat> = vec![int(0), int(1)];
    if let Some(s) = ray_source(phase, p, q)? {
        let (ap, d) = (geom::sub(p, &s), geom::sub(q, p));
        let n = geom::cross(&ap, &geom::sub(q, &s));
        if !geom::is_zero(&n) {
            for v in &sub.vertices {
                let sv = geom::sub(&v.coords, &s);
                if geom::is_zero(&sv) || !geom::dot(&n, &sv).is_zero() {
                    continue;
                }
                let den = geom::dot(&geom::cross(&d, &sv), &n);
                if den.is_zero() {
                    continue;
                }
                let t = -geom::dot(&geom::cross(&ap, &sv), &n) / den;
                if t.is_positive() && t < int(1) {
                    params.push(t);
                }
            }
        }
    }
    params.sort();
    params.dedup();
    let at = |t: &Rat| geom::lerp(p, q, t);
    let imgs: Vec<Pt> = params.iter().map(|t| image(phase, &at(t))).collect::<Result<_>>()?;
    for (w, iw) in params.windows(2).zip(imgs.windows(2)) {
        let m = image(phase, &at(&((&w[0] + &w[1]) * half())))?;
        if !on_segment(&iw[0], &iw[1], &m) {
            return Err(Error::Geometry(format!(
                "image of {} -> {} bends between breakpoints",
                fmt_pt(p),
                fmt_pt(q)
            )));
        }
    }
    // keep only corners: breakpoints from vertices off the image add none
    let mut out: Vec<Pt> = Vec::new();
    for x in imgs {
        if out.last() == Some(&x) {
            continue;
        }
        while out.len() >= 2 && on_segment(&out[out.len() - 2], &x, &out[out.len() - 1]) {
            out.pop();
        }
        out.push(x);
    }
    Ok(out)
}

fn on_segment(a: &Pt, b: &Pt, m: &Pt) -> bool {
    if a == b {
        return m == a;
    }
    let d = geom::sub(b, a);
    let r = geom::sub(m, a);
    if !geom::is_zero(&geom::cross(&d, &r)) {
        return false;
    }
    let t = geom::dot(&r, &d) / geom::dot(&d, &d);
    !t.is_negative() && t <= int(1)
}

/// Oriented `𝒞`-edges covering the segment `[a, b]`.
fn edges_of_segment(a: &Pt, b: &Pt) -> Result<Vec<(usize, usize)>> {
    if a == b {
        return Ok(Vec::new());
    }
    let sub = subdivision();
    let mut out = Vec::new();
    for (p, q, cs) in sub.split_segment(a, b)? {
        let (u, v) = (vertex_at(&p)?, vertex_at(&q)?);
        let mut want = vec![u, v];
        want.sort_unstable();
        if cs != want {
            return Err(Error::Geometry(format!("{} -> {} leaves the 1-skeleton", fmt_pt(a), fmt_pt(b))));
        }
        out.push((u, v));
    }
    Ok(out)
}

/// The `𝒞`-triangles filling a closed planar polygon, with multiplicities.
fn planar_fill(poly: &[Pt]) -> Result<LocalChain> {
    let sub = subdivision();
    let mut loop_chain = LocalChain::new();
    for i in 0..poly.len() {
        for (u, v) in edges_of_segment(&poly[i], &poly[(i + 1) % poly.len()])? {
            add_simplex(&mut loop_chain, &[u, v], 1);
        }
    }
    let mut fill = LocalChain::new();
    if loop_chain.is_empty() {
        return Ok(fill);
    }
    let o = &poly[0];
    let mut normal = geom::origin();
    'outer: for i in 1..poly.len() {
        for j in i + 1..poly.len() {
            let n = geom::cross(&geom::sub(&poly[i], o), &geom::sub(&poly[j], o));
            if !geom::is_zero(&n) {
                normal = n;
                break 'outer;
            }
        }
    }
    if geom::is_zero(&normal) {
        return Err(Error::Geometry("degenerate sweep with a nonzero boundary".into()));
    }
    if poly.iter().any(|x| !geom::dot(&normal, &geom::sub(x, o)).is_zero()) {
        return Err(Error::Geometry("sweep region is not planar".into()));
    }
    let axis = (0..3).max_by_key(|&k| normal[k].abs()).expect("three axes");
    let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
    let flat = |x: &Pt| (x[i].clone(), x[j].clone());
    let ring: Vec<(Rat, Rat)> = poly.iter().map(flat).collect();
    for tri in sub.simplices(2) {
        if tri.iter().any(|&v| !geom::dot(&normal, &geom::sub(sub.coords(v), o)).is_zero()) {
            continue;
        }
        let pts: Vec<Pt> = tri.iter().map(|&v| sub.coords(v).clone()).collect();
        let c = flat(&geom::centroid(&pts));
        let w = winding(&ring, &c);
        if w == 0 {
            continue;
        }
        let (a, b, d) = (flat(&pts[0]), flat(&pts[1]), flat(&pts[2]));
        let det = (&b.0 - &a.0) * (&d.1 - &a.1) - (&b.1 - &a.1) * (&d.0 - &a.0);
        add_simplex(&mut fill, tri, if det.is_positive() { w } else { -w });
    }
    if local_boundary(&fill) != loop_chain {
        return Err(Error::Geometry("swept region is not a union of 𝒞-triangles".into()));
    }
    Ok(fill)
}

fn winding(ring: &[(Rat, Rat)], c: &(Rat, Rat)) -> i64 {
    let mut w = 0;
    for k in 0..ring.len() {
        let (a, b) = (&ring[k], &ring[(k + 1) % ring.len()]);
        let left = (&b.0 - &a.0) * (&c.1 - &a.1) - (&c.0 - &a.0) * (&b.1 - &a.1);
        if a.1 <= c.1 {
            if b.1 > c.1 && left.is_positive() {
                w += 1;
            }
        } else if b.1 <= c.1 && left.is_negative() {
            w -= 1;
        }
    }
    w
}

/// Minimal cube of the open segment `[a, b]` of `cube`, with the endpoints
/// in its chart.
fn edge_home(ctx: &TraceContext, cube: &Cube, a: &Pt, b: &Pt) -> Result<(Cube, Pt, Pt)> {
    let mask = point_mask(&geom::lerp(a, b, &half()));
    let home = if mask == 0 {
        Cube::from_cell(cube.cell())?
    } else {
        Cube::from_cell(&ctx.store.minimal_cube(&cube.local_cell(mask))?)?
    };
    if home.basis() == cube.basis() {
        return Ok((home, a.clone(), b.clone()));
    }
    let conv = |x: &Pt| -> Result<Pt> {
        chart_of(home.basis(), &gram_of(cube.basis(), x)?)
            .ok_or_else(|| Error::Integrity("edge outside its minimal cube".into()))
    };
    Ok((home.clone(), conv(a)?, conv(b)?))
}

/// Cone `S(e)` of the `𝒞`-edge `[a, b]` of `cube`.
pub fn edge_cone(ctx: &TraceContext, cube: &Cube, a: &Pt, b: &Pt) -> Result<FormalChain> {
    let mut out = FormalChain::zero();
    let mut work = vec![(cube.clone(), a.clone(), b.clone())];
    let mut steps = 0usize;
    while let Some((c, a, b)) = work.pop() {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Integrity("edge sweep does not terminate".into()));
        }
        let (home, a, b) = edge_home(ctx, &c, &a, &b)?;
        let plan = ctx.plan(home.cell())?;
        let mut cur = vec![(a, b)];
        let mut region = LocalChain::new();
        for phase in &plan.phases {
            let mut next = Vec::new();
            for (p, q) in cur {
                let mid = geom::lerp(&p, &q, &half());
                if apply_phase(phase, &mid)?.is_none() {
                    if image(phase, &p)? != p || image(phase, &q)? != q {
                        return Err(Error::Geometry(format!(
                            "{:?}: edge {} -> {} tears",
                            phase.kind,
                            fmt_pt(&p),
                            fmt_pt(&q)
                        )));
                    }
                    next.push((p, q));
                    continue;
                }
                let within = |e: Error| match e {
                    Error::Geometry(m) => Error::Geometry(format!("{:?} on {} -> {}: {m}", phase.kind, fmt_pt(&p), fmt_pt(&q))),
                    e => e,
                };
                let line = image_polyline(phase, &p, &q).map_err(within)?;
                let mut poly = vec![p.clone(), q.clone()];
                poly.extend(line.iter().rev().cloned());
                poly.dedup();
                if poly.len() > 1 && poly.first() == poly.last() {
                    poly.pop();
                }
                for (s, k) in planar_fill(&poly).map_err(within)? {
                    add_simplex(&mut region, &s, k);
                }
                for w in line.windows(2) {
                    let sub = subdivision();
                    for (u, v) in edges_of_segment(&w[0], &w[1]).map_err(within)? {
                        next.push((sub.coords(u).clone(), sub.coords(v).clone()));
                    }
                }
            }
            cur = next;
        }
        out.extend_local(home.basis(), &region)?;
        if home.is_fundamental() {
            if !cur.is_empty() {
                return Err(Error::Geometry("edge survives the fundamental cube".into()));
            }
            continue;
        }
        for (p, q) in cur {
            if !plan.in_xi(&geom::lerp(&p, &q, &half())) {
                return Err(Error::Geometry(format!(
                    "{:?}: edge image {} -> {} ends outside the minimal set",
                    home.cell(),
                    fmt_pt(&p),
                    fmt_pt(&q)
                )));
            }
            work.push((home.clone(), p, q));
        }
    }
    Ok(out.normalize())
}

/// Cone of a 1-chain: the sum of the cones of its edges.
pub fn chain_cone(ctx: &TraceContext, c: &FormalChain) -> Result<FormalChain> {
    let sub = subdivision();
    let mut out = FormalChain::zero();
    for t in c.normalize().terms {
        if t.dim != 1 {
            return Err(Error::Domain("cones are built over 1-chains".into()));
        }
        let cube = Cube::from_basis(*t.gamma.cols())?;
        let v = &sub.catalogue[t.cell].verts;
        let s = edge_cone(ctx, &cube, sub.coords(v[0]), sub.coords(v[1]))?;
        out.add_scaled(&s, t.coeff);
    }
    Ok(out.normalize())
}

/// `𝒞`-cells met by the trajectories of points of a `𝒞`-simplex.
#[derive(Clone, Debug, Serialize)]
pub struct SweptCells {
    /// `(γ, catalogue id, dim)` of every closed `𝒞`-simplex met.
    pub cells: BTreeSet<(Vec<[i64; 3]>, usize, usize)>,
    pub samples: usize,
    pub max_dim: usize,
}

/// Swept cells of the `𝒞`-simplex `verts` of `cube`, from the vertices and
/// `samples` interior points of every face; every trajectory piece is
/// assigned the exact closed `𝒞`-simplex containing it.
pub fn swept_cells(ctx: &TraceContext, cube: &Cube, verts: &[usize], samples: usize) -> Result<SweptCells> {
    let sub = subdivision();
    let pts: Vec<Pt> = verts.iter().map(|&v| sub.coords(v).clone()).collect();
    let mut starts: Vec<Pt> = pts.clone();
    for k in 0..samples {
        // deterministic interior points with all weights positive
        let w: Vec<i64> = (0..pts.len()).map(|i| 1 + ((k * 7 + i * 3 + k * i) % 11) as i64).collect();
        let total: i64 = w.iter().sum();
        let mut x = geom::origin();
        for (p, wi) in pts.iter().zip(&w) {
            x = geom::add(&x, &geom::scale(p, &rat(*wi, total)));
        }
        starts.push(x);
    }
    let mut cells = BTreeSet::new();
    let mut max_dim = 0;
    for x in &starts {
        let t = trace_h3(ctx, cube, x)?;
        for p in &t.pieces {
            let (id, g, _) = sub.place(&p.csimplex)?;
            let gamma = GammaElt::from_cols(*Cube::from_cell(&p.cube)?.basis())?.mul(&sub.stabiliser[g].gamma);
            max_dim = max_dim.max(p.csimplex.len() - 1);
            cells.insert((gamma.rows().to_vec(), id, p.csimplex.len() - 1));
        }
    }
    Ok(SweptCells { cells, samples: starts.len(), max_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::soule::fundamental_cube;

    #[test]
    fn winding_of_a_square() {
        let sq = vec![(int(0), int(0)), (int(2), int(0)), (int(2), int(2)), (int(0), int(2))];
        assert_eq!(winding(&sq, &(int(1), int(1))), 1);
        assert_eq!(winding(&sq, &(int(3), int(1))), 0);
        let rev: Vec<_> = sq.iter().rev().cloned().collect();
        assert_eq!(winding(&rev, &(int(1), int(1))), -1);
    }

    #[test]
    fn cone_in_the_fundamental_cube() {
        let ctx = TraceContext::new(1, rat(1, 8)).unwrap();
        let sub = subdivision();
        let cube = fundamental_cube();
        for e in sub.simplices(1).iter().take(30) {
            let (a, b) = (sub.coords(e[0]), sub.coords(e[1]));
            let s = edge_cone(&ctx, &cube, a, b).unwrap();
            let mut want = FormalChain::zero();
            want.push_local(cube.basis(), e, 1).unwrap();
            want.add_scaled(&vertex_track(&ctx, &cube, b).unwrap(), 1);
            want.add_scaled(&vertex_track(&ctx, &cube, a).unwrap(), -1);
            assert!(s.boundary().equivalent(&want).unwrap(), "{e:?}");
        }
    }
}
