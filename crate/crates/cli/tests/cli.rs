use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wellrounded")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("json output")
}

#[test]
fn incidence_table_matches() {
    let v = json(&["incidence-table"]);
    assert_eq!(v["check"]["passed"], true);
    assert_eq!(v["table"][0][4], 16);
    assert_eq!(v["table"][4][0], 16);
    assert_eq!(v["table"][2][3], 0);
}

#[test]
fn cube_obj_has_the_expected_counts() {
    let o = run(&["export-geometry", "--format", "obj"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let count = |p: &str| s.lines().filter(|l| l.starts_with(p)).count();
    assert_eq!((count("v "), count("l "), count("f ")), (16, 24, 10));
    let sizes: Vec<usize> = s.lines().filter(|l| l.starts_with("f ")).map(|l| l.split(' ').count() - 1).collect();
    assert_eq!(sizes.iter().filter(|&&k| k == 6).count(), 6);
    assert_eq!(sizes.iter().filter(|&&k| k == 3).count(), 4);
}

#[test]
fn hexagon_rings_follow_edges() {
    let v = json(&["export-geometry"]);
    let edges: Vec<(u64, u64)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    for f in v["faces"].as_array().unwrap() {
        let ring: Vec<u64> = f.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        for k in 0..ring.len() {
            let (a, b) = (ring[k], ring[(k + 1) % ring.len()]);
            assert!(edges.contains(&(a, b)) || edges.contains(&(b, a)), "{a}-{b} is not an edge");
        }
    }
}

#[test]
fn fundamental_domain_is_four_tetrahedra() {
    let v = json(&["export-geometry", "--target", "fundamental-domain"]);
    let tets = v["tetrahedra"].as_array().unwrap();
    assert_eq!(tets.len(), 4);
    assert!(tets.iter().all(|t| t.as_array().unwrap().len() == 4));
}

#[test]
fn obj_precision_flag() {
    let s = stdout(&run(&["export-geometry", "--target", "fundamental-domain", "--format", "obj", "--precision", "3"]));
    let v = s.lines().find(|l| l.starts_with("v ")).unwrap();
    assert!(v.split(' ').skip(1).all(|x| x.split('.').nth(1).is_some_and(|d| d.len() == 3)));
}

#[test]
fn trace_ends_at_the_center() {
    let v = json(&["trace", "--radius", "2", "--start", "1,1,0;0,1,0;0,0,1@1/2,-1/3,1/5"]);
    let pieces = v["pieces"].as_array().unwrap();
    let last = pieces.last().unwrap();
    assert_eq!(last["to"], serde_json::json!(["0", "0", "0"]));
    assert_eq!(last["carrier_level"], 0);
}

#[test]
fn rank_two_trace_reaches_i() {
    let v = json(&["trace", "--rank", "2", "--start", "1,0;1,1@1/3"]);
    let last = v["segments"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["to"], "0");
}

#[test]
fn path_export_is_a_polyline() {
    let s = stdout(&run(&["export-path", "--radius", "2", "--start", "1,1,0;0,1,0;0,0,1", "--format", "obj"]));
    let verts = s.lines().filter(|l| l.starts_with("v ")).count();
    let lines = s.lines().filter(|l| l.starts_with("l ")).count();
    assert!(lines > 0);
    assert_eq!(verts, 2 * lines);
    assert!(s.contains("carrier"));
}

#[test]
fn sigma_of_a_path_is_one_dimensional() {
    let v = json(&["sigma", "--gammas", "1,1,0;0,1,0;0,0,1"]);
    assert_eq!(v["max_dim"], 1);
    assert_eq!(v["face_identities"], serde_json::json!([true, true]));
}

#[test]
fn em_check_passes() {
    let o = run(&["em-check", "--n", "2", "--samples", "20"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn reports_are_deterministic() {
    let a = stdout(&run(&["check", "--suite", "projection", "--seed", "7"]));
    let b = stdout(&run(&["check", "--suite", "projection", "--seed", "7"]));
    assert_eq!(a, b);
}

#[test]
fn evaluate_reads_values() {
    let dir = std::env::temp_dir().join(format!("wellrounded-eval-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("values.json");
    std::fs::write(&path, r#"{"8": {"degree": 1, "coeffs": {"1,0,0": "1"}}}"#).unwrap();
    let v = json(&["evaluate", "--values", path.to_str().unwrap(), "--gammas", "1,1,0;0,1,0;0,0,1"]);
    assert_eq!(v["degree"], 1);
    // a missing generator value is an error
    std::fs::write(&path, r#"{"3": {"degree": 1, "coeffs": {"1,0,0": "1"}}}"#).unwrap();
    let o = run(&["evaluate", "--values", path.to_str().unwrap(), "--gammas", "1,1,0;0,1,0;0,0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("wellrounded-out-{}.json", std::process::id()));
    let o = run(&["check", "--suite", "incidence", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "incidence");
}

#[test]
fn bad_inputs_exit_with_errors() {
    assert_eq!(run(&["check", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["xi", "--cube", "1,0,0;0,1,0"]).status.code(), Some(2));
    assert_eq!(run(&["trace", "--delta", "1/2", "--start", "1,0,0;0,1,0;0,0,1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--suite", "filling", "--radius", "1"]).status.code(), Some(2));
}

#[test]
fn workers_flag_is_accepted() {
    assert!(run(&["check", "--suite", "appendix", "--workers", "2"]).status.success());
}
