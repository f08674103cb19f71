//! The contraction `h_2` of the Serre tree.
//!
//! A point of an arc `{v1, v2}` is the form `[[2, w], [w, 2]]` in the basis
//! `(v1, v2)`, `w ∈ [-1, 1]`: `w = -1` is the endpoint `{v1, v2, v1 + v2}`,
//! `w = 1` the endpoint `{v1, v2, v1 - v2}`, and `w = 0` on the fundamental
//! arc is the point `i`. Points travel along their arc towards its minimal
//! endpoint and continue in that vertex's minimal arc.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::complex::distance::DistanceRecord;
use crate::complex::serre::{arc_endpoints, fundamental_arc, minimal_arc, xi_arc, Arc, Vertex};
use crate::complex::Cell;
use crate::error::{Error, Result};
use crate::intvec::{vec_cmp, IntVec, OrderResult};
use crate::quadform::HPoint;
use crate::rational::{format_rat, int, Rat};

/// The endpoint of a non-fundamental arc the contraction moves towards.
pub fn orient_arc_w2(a: &Arc) -> Result<Vertex> {
    xi_arc(a)
}

/// A point of `W_2` in the chart of an arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct W2Point {
    pub arc: Arc,
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub w: Rat,
}

impl W2Point {
    pub fn new(arc: Arc, w: Rat) -> Result<Self> {
        if arc.dim() != 1 || w > int(1) || w < int(-1) {
            return Err(Error::Domain(format!("({arc:?}, {}) is not an arc point", format_rat(&w))));
        }
        Ok(Self { arc, w })
    }

    /// A vertex, placed in the chart of its minimal arc.
    pub fn vertex(p: &Vertex) -> Result<Self> {
        let arc = minimal_arc(p)?;
        let w = endpoint_coordinate(&arc, p)?;
        Ok(Self { arc, w })
    }

    pub fn i() -> Self {
        Self { arc: fundamental_arc(), w: Rat::zero() }
    }

    /// Upper half-plane point of the marked lattice `(Z^2, Q)`: the basis of
    /// the arc is carried to the standard basis.
    pub fn to_hpoint(&self) -> Result<HPoint> {
        let v = self.arc.decoration().reps();
        let det = crate::intvec::det(&[v[0], v[1]]) as i64;
        // Gram in the standard basis is B^{-T} [[2,w],[w,2]] B^{-1}.
        let inv = [[v[1].0[1] * det, -v[1].0[0] * det], [-v[0].0[1] * det, v[0].0[0] * det]];
        let q = [[int(2), self.w.clone()], [self.w.clone(), int(2)]];
        let g = |i: usize, j: usize| {
            let mut acc = Rat::zero();
            for a in 0..2 {
                for b in 0..2 {
                    acc += &q[a][b] * int(inv[a][i] * inv[b][j]);
                }
            }
            acc
        };
        HPoint::from_gram(&g(0, 0), &g(0, 1), &g(1, 1))
    }
}

/// `-1` for the `v1 + v2` endpoint of `a`, `1` for the `v1 - v2` endpoint.
pub fn endpoint_coordinate(a: &Arc, p: &Vertex) -> Result<Rat> {
    let [sum, diff] = arc_endpoints(a)?;
    if *p == sum {
        Ok(int(-1))
    } else if *p == diff {
        Ok(int(1))
    } else {
        Err(Error::Domain(format!("{p:?} is not an endpoint of {a:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct W2Segment {
    pub arc: Arc,
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub from: Rat,
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub to: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct W2Trajectory {
    pub segments: Vec<W2Segment>,
}

impl W2Trajectory {
    pub fn end(&self) -> Option<W2Point> {
        self.segments.last().map(|s| W2Point { arc: s.arc.clone(), w: s.to.clone() })
    }

    /// Arcs run through, in order.
    pub fn arcs(&self) -> Vec<&Arc> {
        self.segments.iter().map(|s| &s.arc).collect()
    }

    /// `D` strictly decreases from arc to arc.
    pub fn is_strictly_decreasing(&self, rec: &DistanceRecord<2>) -> Result<bool> {
        let levels = self
            .segments
            .iter()
            .map(|s| {
                rec.top(&s.arc)
                    .ok_or_else(|| Error::RadiusExceeded(format!("{:?} is beyond radius {}", s.arc, rec.radius)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(levels.windows(2).all(|w| w[1] < w[0]))
    }
}

/// The trajectory of `p` down to `i`.
pub fn trace_w2(p: &W2Point) -> Result<W2Trajectory> {
    let f = fundamental_arc();
    let mut segments = Vec::new();
    let (mut arc, mut w) = (p.arc.clone(), p.w.clone());
    if w.abs() == Rat::one() && arc != f {
        // a vertex moves in its minimal arc
        let [sum, diff] = arc_endpoints(&arc)?;
        let v = if w < Rat::zero() { sum } else { diff };
        let m = minimal_arc(&v)?;
        w = endpoint_coordinate(&m, &v)?;
        arc = m;
    }
    loop {
        if arc == f {
            if !w.is_zero() {
                segments.push(W2Segment { arc, from: w, to: Rat::zero() });
            }
            return Ok(W2Trajectory { segments });
        }
        if segments.len() > 4096 {
            return Err(Error::Integrity("tree trajectory does not terminate".into()));
        }
        let x = orient_arc_w2(&arc)?;
        let wx = endpoint_coordinate(&arc, &x)?;
        if w != wx {
            segments.push(W2Segment { arc: arc.clone(), from: w, to: wx });
        }
        let next = minimal_arc(&x)?;
        if next == arc {
            return Err(Error::Integrity(format!("{x:?} is minimal for its own arc {arc:?}")));
        }
        w = endpoint_coordinate(&next, &x)?;
        arc = next;
    }
}

/// Which endpoint of the arc `{a, b}` is minimal, read in any lattice with
/// the norm-lexicographic preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairOrientation {
    /// Towards `{a, b, a + b}`.
    Sum,
    /// Towards `{a, b, a - b}`.
    Difference,
    /// The arc is minimal at both ends.
    Fundamental,
}

/// Orientation of the arc `{a, b}`: the `a ± b` endpoint is minimal when
/// `a ± b` undercuts the larger of `a`, `b`.
pub fn orient_pair<const M: usize>(a: &IntVec<M>, b: &IntVec<M>) -> Result<PairOrientation> {
    if crate::intvec::rank(&[*a, *b]) < 2 {
        return Err(Error::Domain(format!("{a:?} and {b:?} are dependent")));
    }
    let max = if vec_cmp(a, b) == OrderResult::Less { *b } else { *a };
    let below = |s: IntVec<M>| -> Result<bool> {
        match vec_cmp(&s, &max) {
            OrderResult::Less => Ok(true),
            OrderResult::Greater => Ok(false),
            OrderResult::Approx => Err(Error::Integrity(format!("{s:?} ≈ {max:?} in the arc {{{a:?}, {b:?}}}"))),
        }
    };
    match (below(*a + *b)?, below(*a - *b)?) {
        (true, false) => Ok(PairOrientation::Sum),
        (false, true) => Ok(PairOrientation::Difference),
        (false, false) => Ok(PairOrientation::Fundamental),
        (true, true) => Err(Error::Integrity(format!("both {a:?} ± {b:?} undercut the pair"))),
    }
}

/// Orientation of a tree arc, through its decoration.
pub fn orient_tree_arc(a: &Arc) -> Result<PairOrientation> {
    let v = a.decoration().reps();
    orient_pair(&v[0], &v[1])
}

/// Vertices visited by the trajectory, for reporting.
pub fn visited_vertices(t: &W2Trajectory) -> Result<Vec<Cell<2>>> {
    let mut out = Vec::new();
    for s in &t.segments {
        let [sum, diff] = arc_endpoints(&s.arc)?;
        if s.to == int(-1) {
            out.push(sum);
        } else if s.to == int(1) {
            out.push(diff);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::serre::{arc, distances, vertex_ball};

    fn v(a: i64, b: i64) -> IntVec<2> {
        IntVec([a, b])
    }

    #[test]
    fn i_is_the_arc_midpoint() {
        let h = W2Point::i().to_hpoint().unwrap();
        assert_eq!(h, HPoint::i());
        let ends = arc_endpoints(&fundamental_arc()).unwrap();
        for e in ends {
            let p = W2Point::vertex(&e).unwrap();
            assert!(p.to_hpoint().unwrap().on_fundamental_arc());
        }
    }

    #[test]
    fn neighbour_vertex_reaches_i() {
        let p = Cell::from_vectors(&[v(1, 0), v(1, 1), v(2, 1)]).unwrap();
        let t = trace_w2(&W2Point::vertex(&p).unwrap()).unwrap();
        assert_eq!(t.end().unwrap(), W2Point::i());
        assert_eq!(t.segments.len(), 2);
        assert_eq!(trace_w2(&W2Point::i()).unwrap().segments.len(), 0);
    }

    #[test]
    fn orientation_matches_tree() {
        for a in crate::complex::serre::arc_ball(5) {
            let o = orient_tree_arc(&a).unwrap();
            if a == fundamental_arc() {
                assert_eq!(o, PairOrientation::Fundamental);
                continue;
            }
            let [sum, diff] = arc_endpoints(&a).unwrap();
            let x = orient_arc_w2(&a).unwrap();
            let want = if x == sum { PairOrientation::Sum } else { PairOrientation::Difference };
            assert!(x == sum || x == diff);
            assert_eq!(o, want, "{a:?}");
        }
        let a = arc(v(1, 0), v(1, 1)).unwrap();
        assert_eq!(orient_tree_arc(&a).unwrap(), PairOrientation::Difference);
    }

    #[test]
    fn descent_is_strict() {
        let rec = distances(7).unwrap();
        for (p, _) in vertex_ball(5) {
            let t = trace_w2(&W2Point::vertex(&p).unwrap()).unwrap();
            assert_eq!(t.end().unwrap_or(W2Point::i()), W2Point::i());
            assert!(t.is_strictly_decreasing(&rec).unwrap());
        }
    }
}
