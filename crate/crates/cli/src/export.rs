//! Mesh and path export. OBJ rounds coordinates at serialization; JSON keeps
//! exact rationals.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use wellrounded::complex::soule::{local_model, Cube};
use wellrounded::contraction::geom::Pt;
use wellrounded::contraction::{subdivision, Trajectory};
use wellrounded::rational::{format_rat, to_f64, Rat};

fn obj_coord(x: &Rat, precision: usize) -> String {
    format!("{:.*}", precision, to_f64(x))
}

fn obj_vertex(out: &mut String, p: &[Rat; 3], precision: usize) {
    let _ = writeln!(out, "v {} {} {}", obj_coord(&p[0], precision), obj_coord(&p[1], precision), obj_coord(&p[2], precision));
}

fn exact(p: &[Rat; 3]) -> Vec<String> {
    p.iter().map(format_rat).collect()
}

#[derive(Serialize)]
pub struct CubeMesh {
    pub decoration: String,
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<[usize; 2]>,
    /// Faces as cyclically ordered vertex indices.
    pub faces: Vec<Vec<usize>>,
}

/// Vertices, edges and cyclically ordered faces of the chart polytope.
pub fn cube_mesh(cube: &Cube) -> CubeMesh {
    let m = local_model();
    let vertices: Vec<Vec<String>> = m.vertex_coords.iter().map(exact).collect();
    let edges: Vec<[usize; 2]> = m.faces_of_dim(1).map(|(_, e)| [e.vertices[0], e.vertices[1]]).collect();
    let faces = m
        .faces_of_dim(2)
        .map(|(_, f)| {
            let inside = |v: &usize| f.vertices.contains(v);
            let mut ring = vec![f.vertices[0]];
            while ring.len() < f.vertices.len() {
                let last = *ring.last().expect("nonempty");
                let next = edges
                    .iter()
                    .filter(|e| inside(&e[0]) && inside(&e[1]))
                    .filter_map(|e| match (e[0] == last, e[1] == last) {
                        (true, _) => Some(e[1]),
                        (_, true) => Some(e[0]),
                        _ => None,
                    })
                    .find(|v| !ring.contains(v));
                match next {
                    Some(v) => ring.push(v),
                    None => break,
                }
            }
            ring
        })
        .collect();
    CubeMesh { decoration: format!("{:?}", cube.cell()), vertices, edges, faces }
}

pub fn cube_obj(mesh: &CubeMesh, precision: usize) -> String {
    let m = local_model();
    let mut out = format!("# cube {}\n", mesh.decoration);
    for p in &m.vertex_coords {
        obj_vertex(&mut out, p, precision);
    }
    for e in &mesh.edges {
        let _ = writeln!(out, "l {} {}", e[0] + 1, e[1] + 1);
    }
    for f in &mesh.faces {
        let idx: Vec<String> = f.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(out, "f {}", idx.join(" "));
    }
    out
}

/// The four tetrahedra of the fundamental domain of the cube's stabiliser.
pub fn fundamental_domain() -> Vec<[Pt; 4]> {
    let sub = subdivision();
    sub.fundamental.iter().map(|&t| sub.tet_points(t)).collect()
}

pub fn fundamental_domain_json() -> Value {
    let tets: Vec<Value> = fundamental_domain()
        .iter()
        .map(|t| Value::Array(t.iter().map(|p| json!(exact(p))).collect()))
        .collect();
    json!({ "tetrahedra": tets })
}

pub fn fundamental_domain_obj(precision: usize) -> String {
    let mut out = String::from("# fundamental domain: four tetrahedra on the cube center\n");
    for (k, t) in fundamental_domain().iter().enumerate() {
        let _ = writeln!(out, "g tetrahedron_{}", k + 1);
        for p in t {
            obj_vertex(&mut out, p, precision);
        }
        let b = 4 * k + 1;
        for f in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            let _ = writeln!(out, "f {} {} {}", b + f[0], b + f[1], b + f[2]);
        }
    }
    out
}

/// A traced path as polylines, one group per chart, carriers as comments.
pub fn path_obj(t: &Trajectory, precision: usize) -> String {
    let mut out = String::from("# trajectory pieces in the chart of their cube\n");
    let mut n = 0;
    let mut current = None;
    for p in &t.pieces {
        if current != Some(&p.cube) {
            let _ = writeln!(out, "g cube {:?}", p.cube);
            current = Some(&p.cube);
        }
        let _ = writeln!(out, "# {:?} carrier {:?} d={} t=[{:.6}, {:.6}]", p.phase, p.carrier, p.carrier_level, p.t0, p.t1);
        obj_vertex(&mut out, &p.from, precision);
        obj_vertex(&mut out, &p.to, precision);
        let _ = writeln!(out, "l {} {}", n + 1, n + 2);
        n += 2;
    }
    out
}
