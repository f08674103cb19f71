//! The Serre tree `W_2`.
//!
//! Arcs are decorated by `Z`-bases `{v1, v2}` of `Z^2`; the endpoints of an
//! arc are `{v1, v2, v1 + v2}` and `{v1, v2, v1 - v2}`. Arcs are compared by
//! the smaller norm of their decoration and then by the larger one.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use super::{Cell, Decoration};
use crate::complex::distance::DistanceRecord;
use crate::error::{Error, Result};
use crate::intvec::{IntVec, OrderResult};

pub type Arc = Cell<2>;
pub type Vertex = Cell<2>;

pub fn fundamental_arc() -> Arc {
    arc(IntVec([1, 0]), IntVec([0, 1])).expect("standard basis")
}

pub fn arc(v1: IntVec<2>, v2: IntVec<2>) -> Result<Arc> {
    if crate::intvec::det(&[v1, v2]).abs() != 1 {
        return Err(Error::Domain(format!("{v1:?}, {v2:?} is not a Z-basis")));
    }
    Cell::from_vectors(&[v1, v2])
}

fn arc_basis(a: &Arc) -> Result<[IntVec<2>; 2]> {
    let reps = a.decoration().reps();
    if a.dim() != 1 {
        return Err(Error::Domain(format!("{a:?} is not an arc")));
    }
    Ok([reps[0], reps[1]])
}

/// The two endpoints, `v1 + v2` first.
pub fn arc_endpoints(a: &Arc) -> Result<[Vertex; 2]> {
    let [v1, v2] = arc_basis(a)?;
    let end = |w: IntVec<2>| Cell::new_unchecked(Decoration::from_vectors(&[v1, v2, w]).expect("primitive"));
    Ok([end(v1 + v2), end(v1 - v2)])
}

/// The three arcs meeting at a vertex.
pub fn arcs_at_vertex(p: &Vertex) -> Result<Vec<Arc>> {
    if p.dim() != 0 {
        return Err(Error::Domain(format!("{p:?} is not a vertex")));
    }
    Ok(p.decoration()
        .basis_subsets()
        .into_iter()
        .map(Cell::new_unchecked)
        .collect())
}

fn arc_key(a: &Arc) -> (i128, i128) {
    let n: Vec<i128> = a.decoration().reps().iter().map(|v| v.norm_sq()).collect();
    (n[0].min(n[1]), n[0].max(n[1]))
}

/// Preorder on arcs: minimum norm, then maximum norm.
pub fn arc_cmp(a: &Arc, b: &Arc) -> OrderResult {
    match arc_key(a).cmp(&arc_key(b)) {
        Ordering::Less => OrderResult::Less,
        Ordering::Equal => OrderResult::Approx,
        Ordering::Greater => OrderResult::Greater,
    }
}

/// The three arcs at `p` sorted ascending, with whether they are strictly ordered.
pub fn ordered_arcs(p: &Vertex) -> Result<(Vec<Arc>, bool)> {
    let mut arcs = arcs_at_vertex(p)?;
    arcs.sort_by_key(arc_key);
    let strict = arcs
        .windows(2)
        .all(|w| arc_cmp(&w[0], &w[1]) == OrderResult::Less);
    Ok((arcs, strict))
}

/// The smallest arc in the star of a vertex, or the arc itself.
pub fn minimal_arc(p: &Cell<2>) -> Result<Arc> {
    if p.dim() == 1 {
        return Ok(p.clone());
    }
    let (arcs, _) = ordered_arcs(p)?;
    if arc_cmp(&arcs[0], &arcs[1]) == OrderResult::Approx {
        return Err(Error::Integrity(format!("{p:?} has no unique minimal arc")));
    }
    Ok(arcs[0].clone())
}

/// The single endpoint of `a` whose minimal arc is not `a`.
pub fn xi_arc(a: &Arc) -> Result<Vertex> {
    if *a == fundamental_arc() {
        return Err(Error::Domain("the fundamental arc has no minimal set".into()));
    }
    let ends = arc_endpoints(a)?;
    let mut out = Vec::new();
    for e in ends {
        if minimal_arc(&e)? != *a {
            out.push(e);
        }
    }
    match out.len() {
        1 => Ok(out.pop().expect("one")),
        n => Err(Error::Integrity(format!("{a:?} has {n} minimal endpoints"))),
    }
}

/// Vertices grouped by graph distance from the endpoints of the fundamental arc.
pub fn vertex_ball(radius: usize) -> Vec<(Vertex, usize)> {
    let start = arc_endpoints(&fundamental_arc()).expect("arc");
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for v in start {
        seen.insert(v.clone(), 0);
        queue.push_back(v);
    }
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        let r = seen[&v];
        out.push((v.clone(), r));
        if r == radius {
            continue;
        }
        for a in arcs_at_vertex(&v).expect("vertex") {
            for w in arc_endpoints(&a).expect("arc") {
                if !seen.contains_key(&w) {
                    seen.insert(w.clone(), r + 1);
                    queue.push_back(w);
                }
            }
        }
    }
    out
}

/// Arcs with at least one endpoint in `vertex_ball(radius)`.
pub fn arc_ball(radius: usize) -> Vec<Arc> {
    let mut set = HashSet::new();
    let mut out = Vec::new();
    for (v, _) in vertex_ball(radius) {
        for a in arcs_at_vertex(&v).expect("vertex") {
            if set.insert(a.clone()) {
                out.push(a);
            }
        }
    }
    out
}

/// `D` on arcs and `d` on vertices up to `radius`, level by level.
pub fn distances(radius: usize) -> Result<DistanceRecord<2>> {
    let mut rec = DistanceRecord::new(radius);
    let f = fundamental_arc();
    rec.set_top(f.clone(), 0);
    let mut level = vec![f];
    for n in 1..=radius + 1 {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for a in &level {
            for e in arc_endpoints(a)? {
                for b in arcs_at_vertex(&e)? {
                    if rec.top(&b).is_none() && seen.insert(b.clone()) {
                        next.push(b);
                    }
                }
            }
        }
        let mut finalized = Vec::new();
        for b in next {
            let x = xi_arc(&b)?;
            let Some(dx) = rec.min_incident(&arcs_at_vertex(&x)?) else {
                rec.frontier.push(b);
                continue;
            };
            if n > radius {
                rec.frontier.push(b);
                continue;
            }
            if dx + 1 != n {
                return Err(Error::Integrity(format!("{b:?} reached at level {n} with D = {}", dx + 1)));
            }
            finalized.push(b);
        }
        if n > radius {
            break;
        }
        if finalized.is_empty() {
            rec.stalled = true;
            break;
        }
        for b in &finalized {
            rec.set_top(b.clone(), n);
        }
        level = finalized;
    }
    rec.fill_faces(|a| arc_endpoints(a).map(|e| e.to_vec()), arcs_at_vertex)?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64) -> IntVec<2> {
        IntVec([a, b])
    }

    #[test]
    fn orientation_of_neighbouring_arc() {
        let a = arc(v(1, 0), v(1, 1)).unwrap();
        let want = Cell::from_vectors(&[v(1, 0), v(0, 1), v(1, 1)]).unwrap();
        assert_eq!(xi_arc(&a).unwrap(), want);
        let b = arc(v(1, 1), v(1, 2)).unwrap();
        let want = Cell::from_vectors(&[v(1, 1), v(1, 2), v(0, 1)]).unwrap();
        assert_eq!(xi_arc(&b).unwrap(), want);
        assert!(xi_arc(&fundamental_arc()).is_err());
    }

    #[test]
    fn small_distances() {
        let rec = distances(3).unwrap();
        for e in arc_endpoints(&fundamental_arc()).unwrap() {
            assert_eq!(rec.cell(&e), Some(0));
            for a in arcs_at_vertex(&e).unwrap() {
                if a != fundamental_arc() {
                    assert_eq!(rec.top(&a), Some(1));
                }
            }
        }
        assert!(!rec.stalled);
    }

    #[test]
    fn ball_sizes() {
        // binary tree growth away from the two base vertices
        let ball = vertex_ball(3);
        assert_eq!(ball.len(), 2 * (1 + 2 + 4 + 8));
    }
}
