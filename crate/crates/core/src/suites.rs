//! Named verification suites over the whole library.
//!
//! Every check reports how many instances it ran and, on failure, the first
//! offending instance in a form the corresponding operation accepts.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::cochain::dd_vanishes;
use crate::cohomology::filling::{cocycle_from_generators, face_identity_check, random_word};
use crate::cohomology::sym::{rho_sym, SymTensor};
use crate::complex::distance::naive_string_distance;
use crate::complex::serre::{
    arc_ball, arc_endpoints, distances, fundamental_arc, minimal_arc, ordered_arcs, vertex_ball, xi_arc,
};
use crate::complex::soule::{
    appendix_listed_triples, appendix_vertex, cubes_at_cell, incidence_table, local_model, Cube,
};
use crate::complex::{Cell, GammaElt};
use crate::contraction::chain::{global_point, FormalChain, GramKey, Term};
use crate::contraction::geom::{self, Pt};
use crate::contraction::lift::lift_mismatches;
use crate::contraction::w2::{trace_w2, W2Point};
use crate::contraction::{subdivision, trace_h3, TraceContext, Trajectory};
use crate::error::{Error, Result};
use crate::intvec::{
    is_fundamental_pair, lemma_connected_one, lemma_connected_two, lemma_norm_rank_two, lemma_sum_diff, IntVec,
};
use crate::par::par_map;
use crate::quadform::{fundamental_soule_form, in_fundamental_cube, project_to_sublattice};
use crate::rational::{int, rat, Rat};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 11] = [
    "incidence",
    "appendix",
    "example-xi",
    "distance3",
    "lemmas",
    "theorem-basis",
    "trace",
    "sweep",
    "em",
    "filling",
    "projection",
];

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub rank: usize,
    /// Distance radius explored for `W_3`.
    pub radius: usize,
    #[serde(serialize_with = "crate::rational::serialize_rat")]
    pub delta: Rat,
    pub seed: u64,
    /// Sample count for the randomised checks.
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { rank: 3, radius: 3, delta: rat(1, 8), seed: 0, samples: 100 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rank == 2 || self.rank == 3) {
            return Err(Error::Domain(format!("rank {} is not 2 or 3", self.rank)));
        }
        if self.delta <= Rat::zero() || self.delta >= rat(1, 4) {
            return Err(Error::Domain("delta must lie in (0, 1/4)".into()));
        }
        Ok(())
    }

    pub fn require_radius(&self, r: usize, what: &str) -> Result<()> {
        if self.radius < r {
            return Err(Error::RadiusExceeded(format!("{what} needs radius {r}, got {}", self.radius)));
        }
        Ok(())
    }

    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub count: usize,
    pub failures: usize,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub config: RunConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn text(&self) -> String {
        let mut s = format!("{} {}\n", if self.passed { "PASS" } else { "FAIL" }, self.suite);
        for c in &self.checks {
            s += &format!(
                "  {} {} [{} cases, {:.1}s] {}\n",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.count,
                c.elapsed.as_secs_f64(),
                c.detail
            );
            if let Some(w) = &c.counterexample {
                s += &format!("       counterexample: {w}\n");
            }
        }
        s
    }
}

/// Running count of instances and failures.
#[derive(Default)]
struct Tally {
    count: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.count += other.count;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    fn finish(self, name: &str, detail: String, start: Instant) -> Check {
        Check {
            name: name.into(),
            passed: self.failures == 0 && self.count > 0,
            count: self.count,
            failures: self.failures,
            detail,
            counterexample: self.first,
            elapsed: start.elapsed(),
        }
    }
}

fn cell3(vs: &[IntVec<3>]) -> Cell<3> {
    Cell::from_vectors(vs).expect("listed decorations are valid")
}

fn show_vs<const M: usize>(vs: &[IntVec<M>]) -> String {
    vs.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(";")
}

fn show_gamma(g: &GammaElt<3>) -> String {
    format!("{:?}", g.rows())
}

// ---------------------------------------------------------------- complex

/// The incidence counts of the Soulé complex, rows and columns ordered
/// vertex, edge, triangle, hexagon, cube. Triangles and hexagons never
/// contain one another.
pub const INCIDENCES: [[Option<usize>; 5]; 5] = [
    [None, Some(6), Some(3), Some(12), Some(16)],
    [Some(2), None, Some(1), Some(4), Some(8)],
    [Some(3), Some(3), None, Some(0), Some(4)],
    [Some(6), Some(6), Some(0), None, Some(3)],
    [Some(16), Some(24), Some(4), Some(6), None],
];

pub fn check_incidence() -> Check {
    let start = Instant::now();
    let got = incidence_table();
    let names = ["vertex", "edge", "triangle", "hexagon", "cube"];
    let mut t = Tally::default();
    for i in 0..5 {
        for j in (0..5).filter(|&j| j != i) {
            t.record(got[i][j] == INCIDENCES[i][j], || {
                format!("{} / {}: computed {:?}, expected {:?}", names[i], names[j], got[i][j], INCIDENCES[i][j])
            });
        }
    }
    t.finish("incidence table", "all off-diagonal entries".into(), start)
}

pub fn check_appendix() -> Check {
    let start = Instant::now();
    let got: BTreeSet<Cell<3>> = cubes_at_cell(&appendix_vertex()).into_iter().collect();
    let want: BTreeSet<Cell<3>> = appendix_listed_triples().iter().map(|t| cell3(t)).collect();
    let mut t = Tally::default();
    for c in got.symmetric_difference(&want) {
        t.record(false, || format!("{c:?} ({})", if got.contains(c) { "extra" } else { "missing" }));
    }
    t.record(got == want && want.len() == 16, || format!("{} computed vs {} listed", got.len(), want.len()));
    t.finish("cubes at the listed vertex", format!("{} cubes", got.len()), start)
}

/// The cube with columns `(1,0,0), (4,1,0), (2,1,1)`.
pub fn example_cube() -> [IntVec<3>; 3] {
    [IntVec([1, 0, 0]), IntVec([4, 1, 0]), IntVec([2, 1, 1])]
}

pub fn check_example_xi() -> Result<Check> {
    let start = Instant::now();
    let [v1, v2, v3] = example_cube();
    let cube = cell3(&[v1, v2, v3]);
    let store = crate::complex::soule::CellStore::new();
    let xi = store.xi_set(&cube)?;
    let got: BTreeSet<Cell<3>> = xi.faces.iter().cloned().collect();
    let want: BTreeSet<Cell<3>> = [v1 - v2, v1 - v3, v2 - v3, v1 - v2 + v3, v1 + v2 - v3]
        .iter()
        .map(|&x| cell3(&[v1, v2, v3, x]))
        .collect();
    let mut t = Tally::default();
    t.record(got == want, || format!("minimal 2-cells {:?}", got));
    Ok(t.finish("example minimal set", format!("{} minimal 2-cells", got.len()), start))
}

pub fn check_naive_distance(cfg: &RunConfig) -> Result<Vec<Check>> {
    cfg.require_radius(3, "the naive distance claims")?;
    let start = Instant::now();
    let d = naive_string_distance(1, 3)?;
    let at = |k| d.values().filter(|&&v| v == k).count();
    let mut out = Vec::new();
    let mut t = Tally::default();
    t.record(at(1) == 24, || format!("{} cubes at distance 1", at(1)));
    out.push(t.finish("neighbour cubes", format!("{} at distance 1", at(1)), start));
    let mut t = Tally::default();
    t.record(at(3) > 2400, || format!("{} cubes at distance 3", at(3)));
    out.push(t.finish("distance-3 count", format!("{} at distance 3", at(3)), start));

    let start = Instant::now();
    let c = cell3(&[IntVec([0, 0, 1]), IntVec([1, 0, -1]), IntVec([0, 1, -2])]);
    let cube = Cube::from_cell(&c)?;
    let (mut two, mut three) = (0, 0);
    for (_, f) in cube.proper_faces() {
        if f.dim() != 2 {
            continue;
        }
        let others: Vec<Cell<3>> = cubes_at_cell(&f).into_iter().filter(|x| *x != c).collect();
        two += others.iter().any(|x| d.get(x) == Some(&2)) as usize;
        three += others.iter().any(|x| d.get(x) == Some(&3)) as usize;
    }
    let mut t = Tally::default();
    t.record(d.get(&c) == Some(&3) && two == 5 && three == 8, || {
        format!("{c:?}: distance {:?}, {two} faces at 2, {three} at 3", d.get(&c))
    });
    out.push(t.finish("illustrative cell", format!("{two} two-faces meet distance 2, {three} meet distance 3"), start));
    Ok(out)
}

/// All `Z`-bases with entries in `[-bound, bound]` whose pairs are all
/// fundamental; the result must be the 48 signed permutations.
pub fn check_fundamental_bases(bound: i64) -> Check {
    let start = Instant::now();
    let vs: Vec<IntVec<3>> = box_vectors::<3>(bound).into_iter().filter(|v| !v.is_zero()).collect();
    let n = vs.len();
    let fund: Vec<Vec<bool>> = par_map(&vs, |a| {
        vs.iter().map(|b| is_fundamental_pair(a, b).unwrap_or(false)).collect()
    });
    let idx: Vec<usize> = (0..n).collect();
    let per_first = par_map(&idx, |&i| {
        let mut t = Tally::default();
        for j in (0..n).filter(|&j| fund[i][j]) {
            for k in (0..n).filter(|&k| fund[i][k] && fund[j][k]) {
                let b = [vs[i], vs[j], vs[k]];
                if crate::intvec::det(&b).abs() != 1 {
                    continue;
                }
                let signed_perm = b.iter().all(|v| v.entries().iter().filter(|&&x| x != 0).count() == 1);
                t.record(signed_perm, || show_vs(&b));
            }
        }
        t
    });
    let mut t = Tally::default();
    for p in per_first {
        t.merge(p);
    }
    let found = t.count;
    let mut check = t.finish("fundamental bases", format!("{found} all-fundamental bases, entries in [-{bound},{bound}]"), start);
    if found != 48 {
        check.passed = false;
    }
    check
}

fn box_vectors<const M: usize>(bound: i64) -> Vec<IntVec<M>> {
    let side = (2 * bound + 1) as usize;
    (0..side.pow(M as u32))
        .map(|mut k| {
            let mut v = [0i64; M];
            for x in v.iter_mut() {
                *x = (k % side) as i64 - bound;
                k /= side;
            }
            IntVec(v)
        })
        .collect()
}

/// The norm ordering of the rank-one lemma for every `(v1 | v2)` with
/// entries in `[-bound, bound]` and determinant `±1` whose arc is neither
/// fundamental nor adjacent to it.
pub fn check_rank_one(bound: i64) -> Result<Check> {
    let start = Instant::now();
    let vs = box_vectors::<2>(bound);
    let f = fundamental_arc();
    let f_ends = arc_endpoints(&f)?;
    let mut t = Tally::default();
    for a in &vs {
        for b in &vs {
            if crate::intvec::det(&[*a, *b]).abs() != 1 {
                continue;
            }
            let arc = crate::complex::serre::arc(*a, *b)?;
            if arc == f || arc_endpoints(&arc)?.iter().any(|e| f_ends.contains(e)) {
                continue;
            }
            let (na, nb, s, d) = (a.norm_sq(), b.norm_sq(), (*a + *b).norm_sq(), (*a - *b).norm_sq());
            let distinct = |x: i128, y: i128, z: i128| x != y && y != z && x != z;
            let ok = distinct(na, nb, s) && distinct(na, nb, d) && s.min(d) < na.max(nb);
            t.record(ok, || show_vs(&[*a, *b]));
        }
    }
    Ok(t.finish("norm lemma, rank one", format!("unimodular pairs in [-{bound},{bound}]"), start))
}

/// A two-vector implication over all nonzero pairs of `[-bound, bound]^3`.
fn exhaustive_pairs(name: &str, bound: i64, primitive: bool, lemma: fn(&IntVec<3>, &IntVec<3>) -> bool) -> Check {
    let start = Instant::now();
    let vs: Vec<IntVec<3>> = box_vectors::<3>(bound)
        .into_iter()
        .filter(|v| !v.is_zero() && (!primitive || v.content() == 1))
        .collect();
    let rows = par_map(&vs, |a| {
        let mut t = Tally::default();
        for b in &vs {
            if primitive && crate::intvec::rank(&[*a, *b]) < 2 {
                continue;
            }
            t.record(lemma(a, b), || show_vs(&[*a, *b]));
        }
        t
    });
    let mut t = Tally::default();
    for r in rows {
        t.merge(r);
    }
    t.finish(name, format!("pairs in [-{bound},{bound}]^3"), start)
}

pub fn check_sum_diff(bound: i64) -> Check {
    exhaustive_pairs("norm lemma, sum and difference", bound, false, lemma_sum_diff)
}

pub fn check_rank_two(bound: i64) -> Check {
    exhaustive_pairs("norm lemma, rank two", bound, true, lemma_norm_rank_two)
}

pub fn check_triples(samples: usize, bound: i64, rng: &mut impl Rng) -> Vec<Check> {
    let start = Instant::now();
    let (mut one, mut two) = (Tally::default(), Tally::default());
    for _ in 0..samples {
        let vs = [0, 1, 2].map(|_| IntVec([0, 1, 2].map(|_| rng.gen_range(-bound..=bound))));
        one.record(lemma_connected_one(&vs), || show_vs(&vs));
        two.record(lemma_connected_two(&vs), || show_vs(&vs));
    }
    let detail = format!("random triples in [-{bound},{bound}]^3");
    vec![
        one.finish("connectedness lemma, one", detail.clone(), start),
        two.finish("connectedness lemma, two", detail, start),
    ]
}

/// Size, connectedness and exclusions of the minimal 2-cells of every cube
/// with `D ≤ max_level`.
pub fn check_xi_structure(ctx: &TraceContext, max_level: usize) -> Result<Vec<Check>> {
    let start = Instant::now();
    let model = local_model();
    let verts = |bit: usize| -> HashSet<usize> {
        model.faces[model.face_index(1 << bit).expect("face bit")].vertices.iter().copied().collect()
    };
    let face_verts: Vec<HashSet<usize>> = (0..10).map(verts).collect();
    let mut size = Tally::default();
    let mut conn = Tally::default();
    let mut opposite = Tally::default();
    let mut triangle = Tally::default();
    // triangles v1 + s2 v2 + s3 v3 and the three hexagons of that sign pattern
    let patterns: [(usize, [usize; 3]); 4] = [(6, [5, 3, 1]), (7, [5, 2, 0]), (8, [4, 3, 0]), (9, [4, 2, 1])];
    let cubes = ctx.record.tops_with(|d| d <= max_level);
    for c in &cubes {
        let bits = ctx.store.xi_set(c)?.face_bits();
        let w = || format!("{c:?} with minimal faces {bits:?}");
        size.record(bits.len() <= 5, w);
        // shared-edge adjacency
        let mut seen = vec![false; bits.len()];
        let mut stack = vec![0];
        if !bits.is_empty() {
            seen[0] = true;
        }
        while let Some(i) = stack.pop() {
            for j in 0..bits.len() {
                if !seen[j] && face_verts[bits[i]].intersection(&face_verts[bits[j]]).count() >= 2 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        conn.record(seen.iter().all(|&s| s), w);
        opposite.record(!(0..3).any(|p| bits.contains(&(2 * p)) && bits.contains(&(2 * p + 1))), w);
        let ok = patterns.iter().all(|(tri, hexes)| !hexes.iter().all(|h| bits.contains(h)) || bits.contains(tri));
        triangle.record(ok, w);
    }
    let detail = format!("{} cubes with D <= {max_level}", cubes.len());
    Ok(vec![
        size.finish("at most five minimal 2-cells", detail.clone(), start),
        conn.finish("minimal 2-cells connected", detail.clone(), start),
        opposite.finish("opposite hexagons exclusive", detail.clone(), start),
        triangle.finish("three hexagons force their triangle", detail, start),
    ])
}

// ------------------------------------------------------------ contraction

/// An interior point of a random flag tetrahedron of the chart.
pub fn sample_point(rng: &mut impl Rng) -> Pt {
    let sub = subdivision();
    let pts = sub.tet_points(rng.gen_range(0..sub.tets.len()));
    let w: Vec<i64> = (0..4).map(|_| rng.gen_range(1..30)).collect();
    let s: i64 = w.iter().sum();
    let mut x = geom::origin();
    for (p, wi) in pts.iter().zip(&w) {
        x = geom::add(&x, &geom::scale(p, &rat(*wi, s)));
    }
    x
}

fn ends_at_center(t: &Trajectory, cube: &Cube, x: &Pt) -> bool {
    match t.end() {
        Some((c, p)) => *c == *crate::complex::soule::fundamental_cube().cell() && *p == geom::origin(),
        None => cube.is_fundamental() && *x == geom::origin(),
    }
}

pub const DELTAS: [(i64, i64); 3] = [(1, 8), (1, 16), (1, 32)];

/// Traces from `samples` points of every cube with `D ≤ max_level`:
/// termination at the center, monotone strata, the same carriers for every
/// `δ` in [`DELTAS`].
pub fn check_traces(ctx: &TraceContext, max_level: usize, samples: usize, rng: &mut impl Rng) -> Result<Vec<Check>> {
    let start = Instant::now();
    let others: Vec<TraceContext> = DELTAS.iter().map(|&(p, q)| ctx.with_delta(rat(p, q))).collect();
    let mut jobs = Vec::new();
    for c in ctx.record.tops_with(|d| d <= max_level) {
        for _ in 0..samples {
            jobs.push((c.clone(), sample_point(rng)));
        }
    }
    let results = par_map(&jobs, |(c, x)| -> Result<(bool, bool, bool, usize)> {
        let cube = Cube::from_cell(c)?;
        let t = trace_h3(ctx, &cube, x)?;
        let mut same = true;
        for o in &others {
            same &= trace_h3(o, &cube, x)?.carriers() == t.carriers();
        }
        Ok((ends_at_center(&t, &cube, x), t.is_monotone(), same, t.pieces.len()))
    });
    let (mut term, mut mono, mut delta) = (Tally::default(), Tally::default(), Tally::default());
    let mut longest = 0;
    for ((c, x), r) in jobs.iter().zip(results) {
        let w = || format!("{c:?} at {}", crate::contraction::trace::fmt_pt(x));
        match r {
            Ok((e, m, s, n)) => {
                term.record(e, w);
                mono.record(m, w);
                delta.record(s, w);
                longest = longest.max(n);
            }
            Err(e) => {
                let msg = format!("{} ({e})", w());
                term.record(false, || msg.clone());
                mono.record(false, || msg.clone());
                delta.record(false, || msg);
            }
        }
    }
    let detail = format!("{samples} points in each cube with D <= {max_level}, longest path {longest} pieces");
    Ok(vec![
        term.finish("traces end at the center", detail.clone(), start),
        mono.finish("strata never increase", detail.clone(), start),
        delta.finish("carriers independent of delta", detail, start),
    ])
}

/// Which endpoint each basis pair of a cube contracts to, against the tree.
pub fn check_local_lift(ctx: &TraceContext, max_level: usize) -> Result<Check> {
    let start = Instant::now();
    let mut t = Tally::default();
    let cubes = ctx.record.tops_with(|d| d <= max_level);
    for c in &cubes {
        let m = lift_mismatches(&ctx.store, c)?;
        t.record(m.is_empty(), || format!("{:?} pair {:?}", c, m[0].pair));
    }
    Ok(t.finish("local lift of the tree contraction", format!("{} cubes with D <= {max_level}", cubes.len()), start))
}

/// Trajectories of the vertices and of one interior point of every
/// `𝒞`-simplex of dimension `k ≤ 2` in every cube with `D ≤ max_level` stay
/// in `𝒞`-cells of dimension `≤ k + 1`.
pub fn check_sweeps(ctx: &TraceContext, max_level: usize) -> Result<Vec<Check>> {
    let start = Instant::now();
    let sub = subdivision();
    // distinct global points, each traced once
    let mut points: BTreeMap<GramKey, (Cube, Pt)> = BTreeMap::new();
    let mut simplices: Vec<(usize, Vec<GramKey>, String)> = Vec::new();
    for c in ctx.record.tops_with(|d| d <= max_level) {
        let cube = Cube::from_cell(&c)?;
        for k in 0..3 {
            for s in sub.simplices(k) {
                let mut pts: Vec<Pt> = s.iter().map(|&v| sub.coords(v).clone()).collect();
                if k > 0 {
                    let mut x = geom::origin();
                    let total: i64 = (1..=s.len() as i64).sum();
                    for (i, p) in pts.iter().enumerate() {
                        x = geom::add(&x, &geom::scale(p, &rat(i as i64 + 1, total)));
                    }
                    pts.push(x);
                }
                let mut keys = Vec::new();
                for p in pts {
                    let key = global_point(cube.basis(), &p)?;
                    points.entry(key.clone()).or_insert_with(|| (cube.clone(), p));
                    keys.push(key);
                }
                simplices.push((k, keys, format!("{c:?} simplex {s:?}")));
            }
        }
    }
    let list: Vec<(&GramKey, &(Cube, Pt))> = points.iter().collect();
    let dims = par_map(&list, |(_, (cube, x))| trace_h3(ctx, cube, x).map(|t| t.max_csimplex_dim()));
    let mut by_key: HashMap<&GramKey, std::result::Result<usize, String>> = HashMap::new();
    for ((k, _), d) in list.iter().zip(dims) {
        by_key.insert(k, d.map_err(|e| e.to_string()));
    }
    let mut tallies = [Tally::default(), Tally::default(), Tally::default()];
    for (k, keys, name) in &simplices {
        let mut ok = true;
        let mut why = String::new();
        for key in keys {
            match &by_key[key] {
                Ok(d) if *d <= k + 1 => {}
                Ok(d) => {
                    ok = false;
                    why = format!("a trajectory meets a {d}-cell");
                }
                Err(e) => {
                    ok = false;
                    why = e.clone();
                }
            }
        }
        tallies[*k].record(ok, || format!("{name}: {why}"));
    }
    let [t0, t1, t2] = tallies;
    let detail = format!("{} distinct points traced", points.len());
    Ok(vec![
        t0.finish("swept 0-cells lie in 1-cells", detail.clone(), start),
        t1.finish("swept 1-cells lie in 2-cells", detail.clone(), start),
        t2.finish("swept 2-cells lie in 3-cells", detail, start),
    ])
}

/// Arc ordering within tree radius `ordering`, traces to `i` within `traces`.
pub fn check_w2(ordering: usize, traces: usize) -> Result<Vec<Check>> {
    let start = Instant::now();
    let f_ends = arc_endpoints(&fundamental_arc())?;
    let mut order = Tally::default();
    for (p, _) in vertex_ball(ordering) {
        if f_ends.contains(&p) {
            continue;
        }
        let (arcs, strict) = ordered_arcs(&p)?;
        order.record(strict && arcs.len() == 3 && minimal_arc(&p).is_ok(), || format!("{p:?}"));
    }
    for a in arc_ball(ordering) {
        if a != fundamental_arc() {
            order.record(xi_arc(&a).is_ok(), || format!("{a:?}"));
        }
    }
    let order = order.finish("arcs at a vertex totally ordered", format!("tree radius {ordering}"), start);

    let start = Instant::now();
    let rec = distances(traces + 1)?;
    let mut reach = Tally::default();
    for (p, _) in vertex_ball(traces) {
        let ok = trace_w2(&W2Point::vertex(&p)?)
            .and_then(|t| Ok(t.end().unwrap_or_else(W2Point::i) == W2Point::i() && t.is_strictly_decreasing(&rec)?));
        reach.record(ok.unwrap_or(false), || format!("{p:?}"));
    }
    let reach = reach.finish("tree traces reach i", format!("tree radius {traces}"), start);
    Ok(vec![order, reach])
}

/// Random rational points of the fundamental cube.
pub fn sample_cube_point(rng: &mut impl Rng) -> [Rat; 3] {
    loop {
        let p = [0, 1, 2].map(|_| {
            let q = rng.gen_range(1..=24);
            rat(rng.gen_range(-q..=q), q)
        });
        if in_fundamental_cube(&p) {
            return p;
        }
    }
}

pub fn check_projections(samples: usize, rng: &mut impl Rng) -> Result<Check> {
    let start = Instant::now();
    let e = [IntVec::<3>::unit(0), IntVec::unit(1), IntVec::unit(2)];
    let mut t = Tally::default();
    for _ in 0..samples {
        let p = sample_cube_point(rng);
        let q = fundamental_soule_form(&p)?;
        let mut ok = true;
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            let h = project_to_sublattice(&q, (&e[i], &e[j]))?;
            ok &= h.on_fundamental_arc();
            if (i, j) == (1, 2) {
                ok &= h.x == &p[0] / int(2);
            }
        }
        t.record(ok, || format!("({}, {}, {})", p[0], p[1], p[2]));
    }
    Ok(t.finish("projections land on the fundamental arc", format!("{samples} points"), start))
}

// ------------------------------------------------------------- cohomology

/// Degrees cycled through by the cohomology checks of the suites.
pub const EM_DEGREES: [usize; 4] = [0, 1, 2, 3];

pub fn check_dd(samples: usize, degrees: &[usize], rng: &mut impl Rng) -> Result<Check> {
    let start = Instant::now();
    let mut t = Tally::default();
    for s in 0..samples {
        let arity = s % 2;
        let degree = degrees[(s / 2) % degrees.len()];
        let args: Vec<GammaElt<3>> = (0..arity + 2).map(|_| random_word(rng, 4)).collect();
        let ok = dd_vanishes(arity, degree, &args, rng)?;
        t.record(ok, || format!("arity {arity}, degree {degree}, {:?}", args.iter().map(show_gamma).collect::<Vec<_>>()));
    }
    Ok(t.finish("d of d vanishes", format!("{samples} random cochains, arities 0 and 1, n in {degrees:?}"), start))
}

/// Face identities of `σ` on `samples` pairs of bounded words, resampling
/// pairs whose translates leave the explored radius.
pub fn check_faces(ctx: &TraceContext, samples: usize, rng: &mut impl Rng) -> Result<Check> {
    let start = Instant::now();
    let mut t = Tally::default();
    let (mut pairs, mut skipped) = (0, 0);
    while pairs < samples {
        if skipped > 20 * samples {
            return Err(Error::RadiusExceeded("too few words stay within the explored radius".into()));
        }
        let (g1, g2) = (random_word(rng, 2), random_word(rng, 2));
        let mut results = Vec::new();
        let mut outside = false;
        for (tuple, faces) in [(vec![g1, g2], 0..3), (vec![g1], 0..2), (vec![g2], 0..2)] {
            for i in faces {
                match face_identity_check(ctx, &tuple, i) {
                    Ok(ok) => results.push((tuple.clone(), i, ok)),
                    Err(Error::RadiusExceeded(_)) => outside = true,
                    Err(e) => return Err(e),
                }
            }
        }
        if outside {
            skipped += 1;
            continue;
        }
        pairs += 1;
        for (tuple, i, ok) in results {
            t.record(ok, || format!("face {i} of {:?}", tuple.iter().map(show_gamma).collect::<Vec<_>>()));
        }
    }
    Ok(t.finish(
        "filling face identities",
        format!("{samples} pairs and their entries, {skipped} pairs beyond the radius resampled"),
        start,
    ))
}

/// `ev(γ·c) = ρ(γ) ev(c)` for random generator values and random chains.
pub fn check_equivariance(samples: usize, degrees: &[usize], rng: &mut impl Rng) -> Result<Check> {
    let start = Instant::now();
    let sub = subdivision();
    let mut t = Tally::default();
    for s in 0..samples {
        let degree = degrees[s % degrees.len()];
        let values: HashMap<usize, SymTensor<3>> =
            (0..sub.catalogue.len()).map(|id| (id, SymTensor::random(degree, 3, rng))).collect();
        let mut chain = FormalChain::zero();
        for _ in 0..rng.gen_range(1..6) {
            let cell = rng.gen_range(0..sub.catalogue.len());
            chain.terms.push(Term {
                coeff: rng.gen_range(-3..=3),
                gamma: random_word(rng, 3),
                cell,
                dim: sub.catalogue[cell].dim,
            });
        }
        let g = random_word(rng, 3);
        let lhs = cocycle_from_generators(&values, degree, &chain.translate(&g))?;
        let rhs = rho_sym(&g, degree, &cocycle_from_generators(&values, degree, &chain)?)?;
        t.record(lhs == rhs, || format!("γ = {}", show_gamma(&g)));
    }
    Ok(t.finish("evaluation is equivariant", format!("{samples} random chains"), start))
}

// ----------------------------------------------------------------- suites

/// Everything the acceptance criteria need from one distance computation.
pub fn context(cfg: &RunConfig) -> Result<TraceContext> {
    TraceContext::new(cfg.radius, cfg.delta.clone())
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    run_suite_with(name, cfg, None)
}

/// [`run_suite`] reusing an existing context.
pub fn run_suite_with(name: &str, cfg: &RunConfig, ctx: Option<&TraceContext>) -> Result<SuiteReport> {
    cfg.validate()?;
    let need = match name {
        "example-xi" | "filling" => Some(3),
        "trace" if cfg.rank == 3 => Some(2),
        "sweep" => Some(2),
        _ => None,
    };
    let owned;
    let c = match (need, ctx) {
        (None, _) => None,
        (Some(r), given) => {
            cfg.require_radius(r, name)?;
            match given {
                Some(c) => Some(c),
                None => {
                    owned = context(cfg)?;
                    Some(&owned)
                }
            }
        }
    };
    let ctx = || c.expect("suite context");
    let checks = match name {
        "incidence" => vec![check_incidence()],
        "appendix" => vec![check_appendix()],
        "example-xi" => {
            let mut v = vec![check_example_xi()?];
            v.extend(check_xi_structure(ctx(), 3)?);
            v
        }
        "distance3" => check_naive_distance(cfg)?,
        "lemmas" => {
            let mut v = vec![check_rank_one(10)?, check_sum_diff(10), check_rank_two(10)];
            v.extend(check_triples(100_000, 50, &mut cfg.rng(6)));
            v
        }
        "theorem-basis" => vec![check_fundamental_bases(3)],
        "trace" => {
            if cfg.rank == 2 {
                check_w2(8, 6)?
            } else {
                let c = ctx();
                let mut v = check_traces(c, 2, cfg.samples, &mut cfg.rng(8))?;
                v.push(check_local_lift(c, 2)?);
                v
            }
        }
        "sweep" => check_sweeps(ctx(), 2)?,
        "em" => vec![
            check_dd(cfg.samples, &EM_DEGREES, &mut cfg.rng(11))?,
            check_equivariance(cfg.samples / 2, &EM_DEGREES, &mut cfg.rng(12))?,
        ],
        "filling" => vec![check_faces(ctx(), 20, &mut cfg.rng(13))?],
        "projection" => vec![check_projections(cfg.samples, &mut cfg.rng(10))?],
        _ => return Err(Error::Domain(format!("unknown suite {name}; known: {}", SUITES.join(", ")))),
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { schema: SCHEMA_VERSION, suite: name.into(), config: cfg.clone(), passed, checks })
}
