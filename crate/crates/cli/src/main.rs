//! `wellrounded`: enumerate the retracts, trace the contraction, build
//! fillings and run the verification suites.

mod export;

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wellrounded::cohomology::{cocycle_from_generators, face_identity_check, filling_sigma, SymTensor};
use wellrounded::complex::distance::{distance_fixpoint_with, naive_string_distance};
use wellrounded::complex::serre::{arc, distances};
use wellrounded::complex::soule::{local_model, CellStore, Cube};
use wellrounded::complex::{parse_vectors, Cell, GammaElt};
use wellrounded::contraction::geom::Pt;
use wellrounded::contraction::subdivision::cvertex_of_local;
use wellrounded::contraction::sweep::swept_cells;
use wellrounded::contraction::w2::{trace_w2, W2Point};
use wellrounded::contraction::{subdivision, trace_h3, TraceContext, Trajectory};
use wellrounded::intvec::IntVec;
use wellrounded::par::par_map;
use wellrounded::rational::{parse_rat, Rat};
use wellrounded::suites::{
    check_dd, check_equivariance, check_incidence, context, run_suite_with, RunConfig, SuiteReport, INCIDENCES,
    SCHEMA_VERSION, SUITES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Obj,
}

#[derive(Parser)]
#[command(name = "wellrounded", version, about = "Well-rounded retracts of GL2 and GL3, their contraction and fillings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Rank of the retract (2 or 3).
    #[arg(long, global = true, default_value_t = 3)]
    rank: usize,
    /// Distance radius explored around the fundamental cell.
    #[arg(long, global = true, default_value_t = 3)]
    radius: usize,
    /// Tier depth as a fraction of the shortest tetrahedron edge, in (0, 1/4).
    #[arg(long, global = true, default_value = "1/8")]
    delta: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for randomised checks.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel checks (0 keeps the default pool).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Decimal digits for OBJ coordinates.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GeometryTarget {
    Cube,
    FundamentalDomain,
}

#[derive(Subcommand)]
enum Command {
    /// Distances of all cells within the radius.
    Enumerate,
    /// Incidence counts between cell types of the rank-3 retract.
    IncidenceTable,
    /// The minimal set of the cube with the given basis.
    Xi {
        /// Basis `"a,b,c;d,e,f;g,h,i"` of the cube.
        #[arg(long)]
        cube: String,
    },
    /// Check the listed cubes around the fundamental vertex.
    AppendixCheck,
    /// Counts of cells by naive string distance.
    NaiveDistance {
        /// Radius in the naive metric.
        #[arg(long)]
        r: usize,
    },
    /// Trace a point to the center of the fundamental cell.
    Trace(StartArgs),
    /// `𝒞`-cells swept by the trajectories of a simplex.
    Sweep {
        /// Basis of the cube whose chart holds the simplex.
        #[arg(long)]
        cell: String,
        /// `𝒞`-vertex indices of the simplex; every fundamental tetrahedron when omitted.
        #[arg(long)]
        simplex: Option<String>,
    },
    /// Trace a point and export the path.
    ExportPath(StartArgs),
    /// Mesh of the cube or of the fundamental domain of its stabiliser.
    ExportGeometry {
        #[arg(long, value_enum, default_value_t = GeometryTarget::Cube)]
        target: GeometryTarget,
        /// Cube basis; the fundamental cube when omitted.
        #[arg(long)]
        cube: Option<String>,
    },
    /// Coboundary and equivariance checks in one degree.
    EmCheck {
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// The filling of a tuple of matrices.
    Sigma {
        /// Matrices by rows, `"r;r;r|r;r;r"`.
        #[arg(long)]
        gammas: String,
    },
    /// Evaluate a generator-valued cochain on a filling.
    Evaluate {
        /// JSON map from catalogue cell id to symmetric tensor.
        #[arg(long)]
        values: PathBuf,
        #[arg(long)]
        gammas: String,
    },
    /// Run one named suite, or all of them.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct StartArgs {
    /// `<basis>@u,v,w` for rank 3, `<v1;v2>@w` for rank 2; a bare
    /// decoration stands for its barycenter.
    #[arg(long)]
    start: String,
}

fn config(g: &Global) -> Result<RunConfig> {
    let cfg = RunConfig {
        rank: g.rank,
        radius: g.radius,
        delta: parse_rat(&g.delta)?,
        seed: g.seed,
        samples: g.samples,
    };
    cfg.validate()?;
    Ok(cfg)
}

struct Output {
    format: Format,
    path: Option<PathBuf>,
}

impl Output {
    fn emit(&self, s: &str) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, s).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{s}");
                if !s.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
        }
    }

    fn json<T: Serialize>(&self, v: &T) -> Result<()> {
        self.emit(&(serde_json::to_string_pretty(v)? + "\n"))
    }

    /// JSON, or the given text rendering.
    fn value<T: Serialize>(&self, v: &T, text: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Text => self.emit(&text()),
            Format::Json => self.json(v),
            Format::Obj => bail!("this command has no OBJ output"),
        }
    }
}

fn basis3(s: &str) -> Result<[IntVec<3>; 3]> {
    let vs = parse_vectors::<3>(s)?;
    vs.try_into().map_err(|_| anyhow!("expected three vectors in {s:?}"))
}

fn parse_gammas(s: &str) -> Result<Vec<GammaElt<3>>> {
    s.split('|')
        .filter(|m| !m.trim().is_empty())
        .map(|m| {
            let rows = parse_vectors::<3>(m)?;
            let rows: [IntVec<3>; 3] = rows.try_into().map_err(|_| anyhow!("expected three rows in {m:?}"))?;
            Ok(GammaElt::from_rows([rows[0].0, rows[1].0, rows[2].0])?)
        })
        .collect()
}

fn parse_point(s: &str) -> Result<Pt> {
    let xs: Vec<Rat> = s.split(',').map(parse_rat).collect::<wellrounded::Result<_>>()?;
    xs.try_into().map_err(|_| anyhow!("expected three coordinates in {s:?}"))
}

/// Rank-3 start: a cube and a point of its chart.
fn start3(store: &CellStore, s: &str) -> Result<(Cube, Pt)> {
    if let Some((b, p)) = s.split_once('@') {
        return Ok((Cube::from_basis(basis3(b)?)?, parse_point(p)?));
    }
    let cell = Cell::from_vectors(&parse_vectors::<3>(s)?)?;
    let cube = Cube::from_cell(&store.minimal_cube(&cell)?)?;
    if cell.dim() == 3 {
        return Ok((cube, [Rat::from_integer(0.into()), Rat::from_integer(0.into()), Rat::from_integer(0.into())]));
    }
    let mask = cube.local_mask_of(&cell).ok_or_else(|| anyhow!("{cell:?} is not a face of its minimal cube"))?;
    let local = local_model().face_index(mask).ok_or_else(|| anyhow!("no local face for {cell:?}"))?;
    Ok((cube, subdivision().coords(cvertex_of_local(local)).clone()))
}

fn start2(s: &str) -> Result<W2Point> {
    let (b, w) = match s.split_once('@') {
        Some((b, w)) => (b, Some(parse_rat(w)?)),
        None => (s, None),
    };
    let vs = parse_vectors::<2>(b)?;
    match (vs.len(), w) {
        (2, w) => Ok(W2Point::new(arc(vs[0], vs[1])?, w.unwrap_or_else(|| Rat::from_integer(0.into())))?),
        (3, None) => Ok(W2Point::vertex(&Cell::from_vectors(&vs)?)?),
        _ => bail!("expected an arc basis `v1;v2[@w]` or a vertex `v1;v2;v3`, got {s:?}"),
    }
}

fn trace_context(cfg: &RunConfig) -> Result<TraceContext> {
    Ok(context(cfg)?)
}

fn traced(cfg: &RunConfig, start: &str) -> Result<Trajectory> {
    let ctx = trace_context(cfg)?;
    let (cube, x) = start3(&ctx.store, start)?;
    Ok(trace_h3(&ctx, &cube, &x)?)
}

fn trajectory_text(t: &Trajectory) -> String {
    let mut s = String::new();
    for p in &t.pieces {
        s += &format!(
            "{:?} in {:?}: {} -> {} carrier {:?} (D={}) t=[{:.4},{:.4}]\n",
            p.phase,
            p.cube,
            wellrounded::contraction::trace::fmt_pt(&p.from),
            wellrounded::contraction::trace::fmt_pt(&p.to),
            p.carrier,
            p.carrier_level,
            p.t0,
            p.t1
        );
    }
    s
}

fn report_of(name: &str, cfg: &RunConfig, checks: Vec<wellrounded::suites::Check>) -> SuiteReport {
    let passed = checks.iter().all(|c| c.passed);
    SuiteReport { schema: SCHEMA_VERSION, suite: name.into(), config: cfg.clone(), passed, checks }
}

fn emit_reports(out: &Output, reports: &[SuiteReport]) -> Result<bool> {
    let passed = reports.iter().all(|r| r.passed);
    match out.format {
        Format::Text => out.emit(&reports.iter().map(SuiteReport::text).collect::<String>())?,
        Format::Json if reports.len() == 1 => out.json(&reports[0])?,
        Format::Json => out.json(&json!({ "schema": SCHEMA_VERSION, "passed": passed, "reports": reports }))?,
        Format::Obj => bail!("reports have no OBJ output"),
    }
    Ok(passed)
}

#[cfg(feature = "parallel")]
fn set_workers(n: usize) -> Result<()> {
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn set_workers(n: usize) -> Result<()> {
    if n > 1 {
        eprintln!("built without the parallel feature; --workers {n} ignored");
    }
    Ok(())
}

/// Runs the command; `Ok(false)` means a check failed.
fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    set_workers(g.workers)?;
    let cfg = config(g)?;
    let out = Output { format: g.format, path: g.out.clone() };
    match cli.command {
        Command::Enumerate => {
            if cfg.rank == 2 {
                let rec = distances(cfg.radius)?;
                out.value(&rec, || level_counts(rec.tops()))?;
            } else {
                let rec = distance_fixpoint_with(cfg.radius, &CellStore::new())?;
                out.value(&rec, || level_counts(rec.tops()))?;
            }
        }
        Command::IncidenceTable => {
            let table = INCIDENCES;
            let check = check_incidence();
            let names = ["vertex", "edge", "triangle", "hexagon", "cube"];
            let text = || {
                let mut s = format!("{:>9}", "");
                for n in names {
                    s += &format!("{n:>9}");
                }
                s.push('\n');
                for (i, row) in table.iter().enumerate() {
                    s += &format!("{:>9}", names[i]);
                    for e in row {
                        s += &format!("{:>9}", e.map_or("-".to_string(), |k| k.to_string()));
                    }
                    s.push('\n');
                }
                s + &format!("{} {}\n", if check.passed { "match" } else { "MISMATCH" }, check.detail)
            };
            out.value(&json!({ "rows": names, "table": table, "check": check }), text)?;
            return Ok(check.passed);
        }
        Command::Xi { cube } => {
            let cube = Cube::from_basis(basis3(&cube)?)?;
            let xi = CellStore::new().xi_set(cube.cell())?;
            out.value(&*xi, || {
                format!(
                    "{:?}\n  vertices {}\n  edges {}\n  2-faces {} (bits {:?})\n",
                    xi.cube,
                    xi.vertices.len(),
                    xi.edges.len(),
                    xi.faces.len(),
                    xi.face_bits()
                )
            })?;
        }
        Command::AppendixCheck => return emit_reports(&out, &[run_suite_with("appendix", &cfg, None)?]),
        Command::NaiveDistance { r } => {
            let d = naive_string_distance(r, cfg.radius)?;
            let mut counts: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
            for (c, &k) in &d {
                *counts.entry(k).or_default().entry(c.dim()).or_default() += 1;
            }
            let mut tops: Vec<(&Cell<3>, usize)> = d.iter().filter(|(c, _)| c.dim() == 3).map(|(c, &k)| (c, k)).collect();
            tops.sort();
            let v = json!({
                "r": r,
                "radius": cfg.radius,
                "counts_by_distance_and_dim": counts,
                "cubes": tops.iter().map(|(c, k)| json!({ "cell": c, "distance": k })).collect::<Vec<_>>(),
            });
            out.value(&v, || {
                counts
                    .iter()
                    .map(|(k, by)| format!("distance {k}: {by:?}\n"))
                    .collect()
            })?;
        }
        Command::Trace(a) => {
            if cfg.rank == 2 {
                let t = trace_w2(&start2(&a.start)?)?;
                out.value(&t, || {
                    t.segments
                        .iter()
                        .map(|s| format!("{:?}: {} -> {}\n", s.arc, s.from, s.to))
                        .collect()
                })?;
            } else {
                let t = traced(&cfg, &a.start)?;
                out.value(&t, || trajectory_text(&t))?;
            }
        }
        Command::ExportPath(a) => {
            if cfg.rank != 3 {
                bail!("path export is for rank 3");
            }
            let t = traced(&cfg, &a.start)?;
            match out.format {
                Format::Obj => out.emit(&export::path_obj(&t, g.precision))?,
                _ => out.value(&t, || trajectory_text(&t))?,
            }
        }
        Command::Sweep { cell, simplex } => {
            let ctx = trace_context(&cfg)?;
            let cube = Cube::from_basis(basis3(&cell)?)?;
            let sub = subdivision();
            let simplices: Vec<Vec<usize>> = match simplex {
                Some(s) => vec![s
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!("bad vertex index {t:?}")))
                    .collect::<Result<_>>()?],
                None => sub.fundamental.iter().map(|&t| sub.tets[t].verts.to_vec()).collect(),
            };
            let swept = par_map(&simplices, |verts| swept_cells(&ctx, &cube, verts, g.samples));
            let mut results = Vec::new();
            for (verts, s) in simplices.iter().zip(swept) {
                let s = s?;
                results.push(json!({
                    "simplex": verts,
                    "samples": s.samples,
                    "max_dim": s.max_dim,
                    "within_bound": s.max_dim <= verts.len(),
                    "cells": s.cells,
                }));
            }
            let ok = results.iter().all(|r| r["within_bound"] == Value::Bool(true));
            out.value(&json!({ "cube": cube.cell(), "sweeps": results }), || {
                results
                    .iter()
                    .map(|r| format!("simplex {}: {} cells, max dim {}\n", r["simplex"], r["cells"].as_array().map_or(0, Vec::len), r["max_dim"]))
                    .collect()
            })?;
            return Ok(ok);
        }
        Command::ExportGeometry { target, cube } => {
            let cube = match cube {
                Some(b) => Cube::from_basis(basis3(&b)?)?,
                None => wellrounded::complex::soule::fundamental_cube(),
            };
            match (target, out.format) {
                (GeometryTarget::Cube, Format::Obj) => out.emit(&export::cube_obj(&export::cube_mesh(&cube), g.precision))?,
                (GeometryTarget::Cube, _) => out.json(&export::cube_mesh(&cube))?,
                (GeometryTarget::FundamentalDomain, Format::Obj) => out.emit(&export::fundamental_domain_obj(g.precision))?,
                (GeometryTarget::FundamentalDomain, _) => out.json(&export::fundamental_domain_json())?,
            }
        }
        Command::EmCheck { n } => {
            let checks = vec![
                check_dd(cfg.samples, &[n], &mut cfg.rng(11))?,
                check_equivariance(cfg.samples, &[n], &mut cfg.rng(12))?,
            ];
            return emit_reports(&out, &[report_of("em", &cfg, checks)]);
        }
        Command::Sigma { gammas } => {
            let gs = parse_gammas(&gammas)?;
            let ctx = trace_context(&cfg)?;
            let chain = filling_sigma(&ctx, &gs)?.normalize();
            let faces = (0..=gs.len())
                .map(|i| face_identity_check(&ctx, &gs, i))
                .collect::<wellrounded::Result<Vec<bool>>>()?;
            let ok = faces.iter().all(|&b| b);
            let v = json!({
                "gammas": gs,
                "max_dim": chain.max_dim(),
                "face_identities": faces,
                "chain": chain,
            });
            out.value(&v, || {
                format!(
                    "{} terms, max dim {:?}, face identities {:?}\n",
                    chain.terms.len(),
                    chain.max_dim(),
                    faces
                )
            })?;
            return Ok(ok);
        }
        Command::Evaluate { values, gammas } => {
            let raw = std::fs::read_to_string(&values).with_context(|| format!("reading {}", values.display()))?;
            let values: HashMap<usize, SymTensor<3>> = serde_json::from_str(&raw).context("values file")?;
            let degree = values.values().next().map(|t| t.degree).ok_or_else(|| anyhow!("values file is empty"))?;
            if values.values().any(|t| t.degree != degree) {
                bail!("values have mixed degrees");
            }
            let gs = parse_gammas(&gammas)?;
            let ctx = trace_context(&cfg)?;
            let chain = filling_sigma(&ctx, &gs)?;
            let r = cocycle_from_generators(&values, degree, &chain)?;
            out.value(&r, || format!("{r:?}\n"))?;
        }
        Command::Check { suite } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                bail!("unknown suite {suite}; known: all, {}", SUITES.join(", "));
            };
            let start = Instant::now();
            let ctx = if names.iter().any(|n| needs_context(n, &cfg)) { Some(trace_context(&cfg)?) } else { None };
            let reports = par_map(&names, |n| run_suite_with(n, &cfg, ctx.as_ref()));
            let reports = reports.into_iter().collect::<wellrounded::Result<Vec<_>>>()?;
            let ok = emit_reports(&out, &reports)?;
            if out.format == Format::Text {
                eprintln!("{} suites in {:.1}s", reports.len(), start.elapsed().as_secs_f64());
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn needs_context(name: &str, cfg: &RunConfig) -> bool {
    matches!(name, "example-xi" | "filling" | "sweep") || (name == "trace" && cfg.rank == 3)
}

fn level_counts<'a, const M: usize>(tops: impl Iterator<Item = (&'a Cell<M>, usize)>) -> String {
    let mut by: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, d) in tops {
        *by.entry(d).or_default() += 1;
    }
    by.iter().map(|(d, n)| format!("D = {d}: {n} top cells\n")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
