//! Trajectories of the contraction of `W_3`.
//!
//! A point moves through the cube of its current stratum by the phases of
//! that cube's plan until it reaches the minimal set, then continues in the
//! minimal cube of the cell it landed on. Cubes with larger `D` act first:
//! stage `n` occupies the time window `[2^-(n+1), 2^-n]`, and the final
//! straight run to the center of the fundamental cube takes `[1/2, 1]`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::geom::{self, Pt};
use super::plan::{CubePlan, Motion, Phase, PhaseKind};
use super::subdivision::{chart_of, gram_of, point_mask, subdivision, Gram};
use crate::complex::distance::{distance_fixpoint_with, DistanceRecord};
use crate::complex::soule::{local_model, CellStore, Cube};
use crate::complex::Cell;
use crate::error::{Error, Result};
use crate::rational::{format_rat, Rat};

/// Distance data, memoised plans and the offset `δ` shared by traces.
pub struct TraceContext {
    pub record: DistanceRecord<3>,
    pub store: CellStore,
    pub delta: Rat,
    plans: RwLock<HashMap<Cell<3>, Arc<CubePlan>>>,
}

impl TraceContext {
    pub fn new(radius: usize, delta: Rat) -> Result<Self> {
        let store = CellStore::new();
        let record = distance_fixpoint_with(radius, &store)?;
        Ok(Self::with_record(record, store, delta))
    }

    pub fn with_record(record: DistanceRecord<3>, store: CellStore, delta: Rat) -> Self {
        Self { record, store, delta, plans: RwLock::new(HashMap::new()) }
    }

    /// Same distances and cell memo, different `δ`.
    pub fn with_delta(&self, delta: Rat) -> Self {
        let store = CellStore::new();
        Self::with_record(self.record.clone(), store, delta)
    }

    pub fn level(&self, cell: &Cell<3>) -> Result<usize> {
        self.record.cell(cell).ok_or_else(|| {
            Error::RadiusExceeded(format!("{cell:?} lies outside the explored radius {}", self.record.radius))
        })
    }

    pub fn plan(&self, cube: &Cell<3>) -> Result<Arc<CubePlan>> {
        if let Some(p) = self.plans.read().expect("poisoned").get(cube) {
            return Ok(p.clone());
        }
        let level = self.level(cube)?;
        let xi = self.store.xi_set(cube)?;
        let plan = Arc::new(CubePlan::build(&Cube::from_cell(cube)?, level, &xi, &self.delta)?);
        Ok(self
            .plans
            .write()
            .expect("poisoned")
            .entry(cube.clone())
            .or_insert(plan)
            .clone())
    }
}

fn simplex_points(s: &[usize]) -> Vec<Pt> {
    let sub = subdivision();
    s.iter().map(|&v| sub.coords(v).clone()).collect()
}

fn in_any(simplices: &[Vec<usize>], carrier: &[usize]) -> bool {
    simplices.iter().any(|s| carrier.iter().all(|v| s.contains(v)))
}

/// Floating-point screen for `line_interval`: `None` only if the ray surely
/// misses the simplex, otherwise a lower bound estimate for the entry time.
fn screen(simplex: &[Pt], x: &[f64; 3], d: &[f64; 3]) -> Option<f64> {
    let f = |p: &Pt| p.clone().map(|c| crate::rational::to_f64(&c));
    let pts: Vec<[f64; 3]> = simplex.iter().map(f).collect();
    let sub3 = |a: &[f64; 3], b: &[f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot3 = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross3 = |a: &[f64; 3], b: &[f64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    match pts.len() {
        3 => {
            let n = cross3(&sub3(&pts[1], &pts[0]), &sub3(&pts[2], &pts[0]));
            let nd = dot3(&n, d);
            let np = dot3(&n, &sub3(x, &pts[0]));
            if nd.abs() < 1e-9 {
                return (np.abs() < 1e-7).then_some(0.0);
            }
            let t = -np / nd;
            if t < -1e-7 {
                return None;
            }
            let q = [x[0] + t * d[0], x[1] + t * d[1], x[2] + t * d[2]];
            // inside test by same-side signs of the three edge normals
            let area = dot3(&n, &n);
            for i in 0..3 {
                let a = &pts[i];
                let b = &pts[(i + 1) % 3];
                let s = dot3(&cross3(&sub3(b, a), &sub3(&q, a)), &n) / area;
                if s < -1e-7 {
                    return None;
                }
            }
            Some(t)
        }
        _ => Some(0.0),
    }
}
/// First point of the ray `x + t d`, `t > 0`, inside one of the simplices.
fn cast(x: &Pt, d: &Pt, targets: &[Vec<usize>]) -> Result<Pt> {
    if geom::is_zero(d) {
        return Err(Error::Geometry("ray with zero direction".into()));
    }
    let xf = x.clone().map(|c| crate::rational::to_f64(&c));
    let df = d.clone().map(|c| crate::rational::to_f64(&c));
    let mut screened: Vec<(f64, &Vec<usize>)> = targets
        .iter()
        .filter_map(|s| screen(&simplex_points(s), &xf, &df).map(|t| (t, s)))
        .collect();
    screened.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<Rat> = None;
    for (tf, s) in screened {
        if let Some(b) = &best {
            if tf > crate::rational::to_f64(b) + 1e-6 {
                break;
            }
        }
        if let Some((lo, hi)) = geom::line_interval(&simplex_points(s), x, d) {
            if hi.is_negative() || !lo.is_positive() {
                continue;
            }
            if best.as_ref().is_none_or(|b| lo < *b) {
                best = Some(lo);
            }
        }
    }
    let t = best.ok_or_else(|| Error::Geometry(format!("ray from {} misses its target", fmt_pt(x))))?;
    Ok(geom::add(x, &geom::scale(d, &t)))
}

/// Position of `x` after one phase, if the phase moves it.
pub fn apply_phase(phase: &Phase, x: &Pt) -> Result<Option<Pt>> {
    let sub = subdivision();
    let carrier = sub.carrier(x)?;
    if !in_any(&phase.domain, &carrier) || in_any(&phase.target, &carrier) {
        return Ok(None);
    }
    let y = match &phase.motion {
        Motion::Hull(maps) => {
            let (s, img) = maps
                .iter()
                .find(|(s, _)| carrier.iter().all(|v| s.contains(v)))
                .ok_or_else(|| Error::Geometry("point in no simplex of the map".into()))?;
            let l = geom::barycentric(&simplex_points(s), x).expect("contained");
            let mut y = geom::origin();
            for (li, &v) in l.iter().zip(img) {
                y = geom::add(&y, &geom::scale(sub.coords(v), li));
            }
            y
        }
        Motion::Radial(source) => cast(x, &geom::sub(x, source), &phase.target)?,
        Motion::Bent { tet, c1, c2 } => {
            let pts = simplex_points(tet);
            let l = geom::barycentric(&pts, x).expect("inside the tetrahedron");
            let c = &l[1] + &l[2];
            if c.is_zero() {
                return Ok(None);
            }
            let v4 = &pts[3];
            let off = geom::add(
                &geom::scale(&geom::sub(c1, v4), &(&l[1] / &c)),
                &geom::scale(&geom::sub(c2, v4), &(&l[2] / &c)),
            );
            let source = geom::add(v4, &off);
            cast(x, &geom::sub(x, &source), &phase.target)?
        }
    };
    Ok((y != *x).then_some(y))
}

/// Moves of `x` through the phases of one cube, ending in its minimal set.
pub fn trace_in_cube(plan: &CubePlan, x: &Pt) -> Result<Vec<(Pt, Pt, PhaseKind)>> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    for phase in &plan.phases {
        if let Some(y) = apply_phase(phase, &cur)? {
            out.push((cur.clone(), y.clone(), phase.kind));
            cur = y;
        }
    }
    if plan.cube.is_fundamental() {
        if !cur.iter().all(Zero::is_zero) {
            return Err(Error::Geometry("fundamental cube did not reach its center".into()));
        }
    } else if !plan.in_xi(&cur) {
        return Err(Error::Geometry(format!(
            "{:?}: point {} ends outside the minimal set",
            plan.cube.cell(),
            fmt_pt(&cur)
        )));
    }
    Ok(out)
}

pub fn fmt_pt(x: &Pt) -> String {
    format!("({}, {}, {})", format_rat(&x[0]), format_rat(&x[1]), format_rat(&x[2]))
}

/// One straight piece of a trajectory inside a single `𝒞`-simplex.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub cube: Cell<3>,
    pub level: usize,
    pub phase: PhaseKind,
    #[serde(serialize_with = "ser_pt")]
    pub from: Pt,
    #[serde(serialize_with = "ser_pt")]
    pub to: Pt,
    /// Smallest cell of `W_3` containing the open piece.
    pub carrier: Cell<3>,
    pub carrier_level: usize,
    /// Smallest closed `𝒞`-simplex containing the piece, in the cube's chart.
    pub csimplex: Vec<usize>,
    pub t0: f64,
    pub t1: f64,
}

fn ser_pt<S: serde::Serializer>(x: &Pt, s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<String> = x.iter().map(format_rat).collect();
    serde::Serialize::serialize(&v, s)
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub pieces: Vec<Piece>,
}

impl Trajectory {
    /// Carrier cells along the path with consecutive repeats removed.
    pub fn carriers(&self) -> Vec<Cell<3>> {
        let mut out: Vec<Cell<3>> = Vec::new();
        for p in &self.pieces {
            if out.last() != Some(&p.carrier) {
                out.push(p.carrier.clone());
            }
        }
        out
    }

    /// The stratum `d` never increases along the path.
    pub fn is_monotone(&self) -> bool {
        self.pieces.windows(2).all(|w| w[1].carrier_level <= w[0].carrier_level)
    }

    /// Every piece stays within a closed `𝒞`-simplex of dimension at most `k`.
    pub fn max_csimplex_dim(&self) -> usize {
        self.pieces.iter().map(|p| p.csimplex.len() - 1).max().unwrap_or(0)
    }

    pub fn end(&self) -> Option<(&Cell<3>, &Pt)> {
        self.pieces.last().map(|p| (&p.cube, &p.to))
    }
}

/// Cube and chart coordinates of the first stage that moves a point given in
/// the chart of `cube`.
pub fn starting_cube(ctx: &TraceContext, cube: &Cube, x: &Pt) -> Result<(Cube, Pt)> {
    let mask = point_mask(x);
    let start = if mask == 0 {
        // plans are written in the canonical chart of the cube
        let canon = Cube::from_cell(cube.cell())?;
        if canon.basis() == cube.basis() {
            return Ok((cube.clone(), x.clone()));
        }
        canon
    } else {
        Cube::from_cell(&ctx.store.minimal_cube(&cube.local_cell(mask))?)?
    };
    let y = chart_of(start.basis(), &gram_of(cube.basis(), x)?)
        .ok_or_else(|| Error::Integrity("face point outside its minimal cube".into()))?;
    Ok((start, y))
}

fn carrier_of(cube: &Cube, mid: &Pt) -> Cell<3> {
    let mask = point_mask(mid);
    if mask == 0 {
        cube.cell().clone()
    } else {
        cube.local_cell(mask)
    }
}

/// Full trajectory of the chart point `x` of `cube` down to the center of the
/// fundamental cube.
pub fn trace_h3(ctx: &TraceContext, cube: &Cube, x: &Pt) -> Result<Trajectory> {
    if !crate::quadform::in_fundamental_cube(x) {
        return Err(Error::Domain(format!("{} is outside the cube", fmt_pt(x))));
    }
    let sub = subdivision();
    let (mut cube, mut x) = starting_cube(ctx, cube, x)?;
    let mut pieces = Vec::new();
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > 64 {
            return Err(Error::Integrity("trajectory does not terminate".into()));
        }
        let plan = ctx.plan(cube.cell())?;
        for (a, b, kind) in trace_in_cube(&plan, &x)? {
            for (p, q, cs) in sub.split_segment(&a, &b)? {
                let mid = geom::lerp(&p, &q, &crate::rational::half());
                let carrier = carrier_of(&cube, &mid);
                let carrier_level = ctx.level(&carrier)?;
                pieces.push(Piece {
                    cube: cube.cell().clone(),
                    level: plan.level,
                    phase: kind,
                    from: p,
                    to: q,
                    carrier,
                    carrier_level,
                    csimplex: cs,
                    t0: 0.0,
                    t1: 0.0,
                });
            }
        }
        if cube.is_fundamental() {
            break;
        }
        let end = pieces
            .last()
            .filter(|p| p.cube == *cube.cell())
            .map(|p| p.to.clone())
            .unwrap_or(x.clone());
        let (next, y) = starting_cube(ctx, &cube, &end)?;
        if next.cell() == cube.cell() {
            return Err(Error::Integrity("landing cell has the same minimal cube".into()));
        }
        cube = next;
        x = y;
    }
    h3_schedule(&mut pieces);
    Ok(Trajectory { pieces })
}

/// Assign times: level `n` runs over `[2^-(n+1), 2^-n]` at constant chart speed.
pub fn h3_schedule(pieces: &mut [Piece]) {
    let mut i = 0;
    while i < pieces.len() {
        let level = pieces[i].level;
        let mut j = i;
        while j < pieces.len() && pieces[j].level == level {
            j += 1;
        }
        let lens: Vec<f64> = pieces[i..j].iter().map(|p| geom::norm_f64(&geom::sub(&p.to, &p.from))).collect();
        let total: f64 = lens.iter().sum();
        let (a, b) = (0.5f64.powi(level as i32 + 1), 0.5f64.powi(level as i32));
        let mut acc = 0.0;
        for (p, l) in pieces[i..j].iter_mut().zip(&lens) {
            p.t0 = a + (b - a) * if total > 0.0 { acc / total } else { 0.0 };
            acc += l;
            p.t1 = a + (b - a) * if total > 0.0 { acc / total } else { 1.0 };
        }
        i = j;
    }
}

/// The global form at the end of a trajectory.
pub fn end_form(t: &Trajectory) -> Result<Option<Gram>> {
    match t.end() {
        Some((c, x)) => Ok(Some(gram_of(Cube::from_cell(c)?.basis(), x)?)),
        None => Ok(None),
    }
}

/// Local face index of the landing face of a chart point, if any.
pub fn landing_face(x: &Pt) -> Option<usize> {
    let m = point_mask(x);
    (m != 0).then(|| local_model().face_index(m)).flatten()
}

