//! Distances to the fundamental cell.
//!
//! `D` is defined on top-dimensional cells and `d` on all cells, by the
//! mutual recursion `d(p) = min D` over incident top cells and
//! `D(S) = 1 + max d` over the minimal set of `S`. The fixpoint is computed
//! level by level: a top cell is settled at level `n` once every cell of its
//! minimal set touches a top cell settled earlier.

use std::collections::{HashMap, HashSet, VecDeque};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use super::soule::{cubes_at_cell, fundamental_cube, CellStore, Cube};
use super::Cell;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, Serialize)]
pub struct DistanceRecord<const M: usize> {
    pub radius: usize,
    #[serde(serialize_with = "sorted_map")]
    top: HashMap<Cell<M>, usize>,
    #[serde(serialize_with = "sorted_map")]
    cells: HashMap<Cell<M>, usize>,
    /// Top cells adjacent to the settled region but not settled within the radius.
    pub frontier: Vec<Cell<M>>,
    /// The fixpoint stopped before the radius with candidates left over.
    pub stalled: bool,
}

fn sorted_map<S: serde::Serializer, const M: usize>(
    m: &HashMap<Cell<M>, usize>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut v: Vec<(&Cell<M>, &usize)> = m.iter().collect();
    v.sort();
    v.serialize(s)
}

impl<const M: usize> DistanceRecord<M> {
    pub fn new(radius: usize) -> Self {
        Self { radius, ..Default::default() }
    }

    pub fn set_top(&mut self, c: Cell<M>, d: usize) {
        self.top.insert(c, d);
    }

    /// `D` of a top cell, if settled.
    pub fn top(&self, c: &Cell<M>) -> Option<usize> {
        self.top.get(c).copied()
    }

    /// `d` of any cell (equal to `D` for top cells), if known.
    pub fn cell(&self, c: &Cell<M>) -> Option<usize> {
        self.top(c).or_else(|| self.cells.get(c).copied())
    }

    pub fn tops(&self) -> impl Iterator<Item = (&Cell<M>, usize)> {
        self.top.iter().map(|(c, &d)| (c, d))
    }

    pub fn tops_with(&self, pred: impl Fn(usize) -> bool) -> Vec<Cell<M>> {
        let mut v: Vec<Cell<M>> = self
            .top
            .iter()
            .filter(|(_, &d)| pred(d))
            .map(|(c, _)| c.clone())
            .collect();
        v.sort();
        v
    }

    pub fn faces(&self) -> impl Iterator<Item = (&Cell<M>, usize)> {
        self.cells.iter().map(|(c, &d)| (c, d))
    }

    /// Smallest settled `D` among the given top cells.
    pub fn min_incident(&self, tops: &[Cell<M>]) -> Option<usize> {
        tops.iter().filter_map(|c| self.top(c)).min()
    }

    /// Populate `d` for every face of every settled top cell.
    pub(crate) fn fill_faces(
        &mut self,
        faces_of: impl Fn(&Cell<M>) -> Result<Vec<Cell<M>>>,
        tops_at: impl Fn(&Cell<M>) -> Result<Vec<Cell<M>>>,
    ) -> Result<()> {
        let mut faces = HashSet::new();
        for c in self.top.keys() {
            faces.extend(faces_of(c)?);
        }
        for f in faces {
            if let Some(d) = self.min_incident(&tops_at(&f)?) {
                self.cells.insert(f, d);
            }
        }
        Ok(())
    }
}

fn cube_faces(c: &Cell<3>) -> Result<Vec<Cell<3>>> {
    Ok(Cube::from_cell(c)?.proper_faces().into_iter().map(|(_, f)| f).collect())
}

fn vertex_neighbours(c: &Cell<3>) -> Result<Vec<Cell<3>>> {
    let cube = Cube::from_cell(c)?;
    let mut out = Vec::new();
    for (_, f) in cube.proper_faces() {
        if f.dim() == 0 {
            out.extend(cubes_at_cell(&f));
        }
    }
    Ok(out)
}

/// The fixpoint of `d` and `D` on `W_3` up to `radius`.
pub fn distance_fixpoint(radius: usize) -> Result<DistanceRecord<3>> {
    distance_fixpoint_with(radius, &CellStore::new())
}

pub fn distance_fixpoint_with(radius: usize, store: &CellStore) -> Result<DistanceRecord<3>> {
    let mut rec = DistanceRecord::new(radius);
    let s0 = fundamental_cube().cell().clone();
    rec.set_top(s0.clone(), 0);
    let mut level = vec![s0];
    for n in 1..=radius + 1 {
        let mut seen = HashSet::new();
        let mut candidates = Vec::new();
        for c in &level {
            for nb in vertex_neighbours(c)? {
                if rec.top(&nb).is_none() && seen.insert(nb.clone()) {
                    candidates.push(nb);
                }
            }
        }
        // Cubes settled at earlier levels can still have unsettled
        // neighbours that only now become decidable.
        for c in std::mem::take(&mut rec.frontier) {
            if rec.top(&c).is_none() && seen.insert(c.clone()) {
                candidates.push(c);
            }
        }
        candidates.sort();
        let evaluate = |c: &Cell<3>| -> Result<Option<usize>> {
            let xi = store.xi_set(c)?;
            let mut worst = 0;
            for cell in xi.all_cells() {
                match rec.min_incident(&cubes_at_cell(cell)) {
                    Some(d) => worst = worst.max(d),
                    None => return Ok(None),
                }
            }
            Ok(Some(worst + 1))
        };
        #[cfg(feature = "parallel")]
        let results: Vec<Result<Option<usize>>> = candidates.par_iter().map(evaluate).collect();
        #[cfg(not(feature = "parallel"))]
        let results: Vec<Result<Option<usize>>> = candidates.iter().map(evaluate).collect();
        let mut settled = Vec::new();
        let mut pending = Vec::new();
        for (c, r) in candidates.into_iter().zip(results) {
            match r? {
                Some(d) if n <= radius => {
                    if d != n {
                        return Err(Error::Integrity(format!("{c:?} settled at level {n} with D = {d}")));
                    }
                    settled.push(c);
                }
                _ => pending.push(c),
            }
        }
        rec.frontier = pending;
        if n > radius {
            break;
        }
        if settled.is_empty() {
            rec.stalled = true;
            break;
        }
        for c in &settled {
            rec.set_top(c.clone(), n);
        }
        level = settled;
    }
    rec.frontier.sort();
    rec.fill_faces(cube_faces, |f| Ok(cubes_at_cell(f)))?;
    Ok(rec)
}

/// Cubes sharing a cell of dimension `3 - r` with `c`.
pub fn string_neighbours(c: &Cell<3>, r: usize) -> Result<Vec<Cell<3>>> {
    if !(1..=3).contains(&r) {
        return Err(Error::Domain(format!("codimension {r} is not in 1..=3")));
    }
    let cube = Cube::from_cell(c)?;
    let mut out: HashSet<Cell<3>> = HashSet::new();
    for (_, f) in cube.proper_faces() {
        if f.dim() == 3 - r {
            out.extend(cubes_at_cell(&f));
        }
    }
    out.remove(c);
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    Ok(v)
}

/// Breadth-first distance through codimension-`r` intersections.
pub fn naive_string_distance(r: usize, radius: usize) -> Result<HashMap<Cell<3>, usize>> {
    let s0 = fundamental_cube().cell().clone();
    let mut dist = HashMap::from([(s0.clone(), 0)]);
    let mut queue = VecDeque::from([s0]);
    while let Some(c) = queue.pop_front() {
        let dc = dist[&c];
        if dc == radius {
            continue;
        }
        for nb in string_neighbours(&c, r)? {
            if !dist.contains_key(&nb) {
                dist.insert(nb.clone(), dc + 1);
                queue.push_back(nb);
            }
        }
    }
    Ok(dist)
}
