use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }
}

fn motivic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motivic")).args(args).output().unwrap()
}

fn run(ws: &Workspace, doc: &str, args: &[&str]) -> (i32, String) {
    let p = ws.file("input.json", doc);
    let mut full: Vec<&str> = args.to_vec();
    let path = p.to_str().unwrap();
    full.insert(1, path);
    let out = motivic(&full);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

const X: &str = r#"{"kind":"monomial","d":1,"exps":[1]}"#;
const XY: &str =
    r#"{"kind":"resolution","d":2,"components":[{"id":"1","m":1,"n":1},{"id":"2","m":1,"n":1}]}"#;
const OCTAHEDRON: &str =
    r#"{"kind":"sphere","facets":[[0,2,4],[0,2,5],[0,3,4],[0,3,5],[1,2,4],[1,2,5],[1,3,4],[1,3,5]]}"#;

#[test]
fn naive_zeta_of_a_coordinate() {
    let ws = Workspace::new();
    let (code, out) = run(&ws, X, &["zeta", "--naive"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[E_empty_o] + (L-1)*[E_1_o]/((T^-1 L^1 - 1))\n");
}

#[test]
fn equivariant_zeta_without_components_is_zero() {
    let ws = Workspace::new();
    let (code, out) = run(&ws, r#"{"kind":"resolution","d":3,"components":[]}"#, &["zeta", "--equivariant"]);
    assert_eq!((code, out.as_str()), (0, "0\n"));
}

#[test]
fn nearby_fiber_of_xy() {
    let ws = Workspace::new();
    let (code, out) = run(&ws, XY, &["nearby"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(-L+1)*[Et_12_o] + [Et_1_o] + [Et_2_o]\n");
}

#[test]
fn identities_hold_for_xy() {
    let ws = Workspace::new();
    for id in ["selfdual", "naive-feq", "sprime-feq", "power:2", "power:5"] {
        let (code, out) = run(&ws, XY, &["check", id]);
        assert_eq!(code, 0, "{id}: {out}");
        assert!(out.ends_with("pass: yes\n"), "{out}");
    }
}

#[test]
fn malformed_input_exits_two() {
    let ws = Workspace::new();
    for doc in ["{", r#"{"kind":"polytope"}"#, r#"{"kind":"monomial","d":1,"exps":[1],"extra":1}"#] {
        assert_eq!(run(&ws, doc, &["zeta"]).0, 2, "{doc}");
    }
    // schema-valid but inconsistent
    assert_eq!(run(&ws, r#"{"kind":"monomial","d":1,"exps":[1,1]}"#, &["zeta"]).0, 2);
    // wrong kind for the command
    assert_eq!(run(&ws, OCTAHEDRON, &["nearby"]).0, 2);
    assert_eq!(run(&ws, XY, &["check", "associativity"]).0, 2);
    assert_eq!(motivic(&["zeta", "/nonexistent/input.json"]).status.code(), Some(2));
    assert_eq!(motivic(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dehn_sommerville_on_the_octahedron() {
    let ws = Workspace::new();
    let (code, out) = run(&ws, OCTAHEDRON, &["toric", "ds"]);
    assert_eq!((code, out.as_str()), (0, "h = 1,3,3,1 symmetric: yes\n"));
    let (code, out) = run(&ws, r#"{"kind":"face-vector","f":[6,12,8]}"#, &["toric", "ds"]);
    assert_eq!((code, out.as_str()), (0, "h = 1,3,3,1 symmetric: yes\n"));
}

#[test]
fn asymmetric_h_vector_exits_one() {
    let ws = Workspace::new();
    let (code, out) = run(&ws, r#"{"kind":"sphere","facets":[[0,1]]}"#, &["toric", "ds"]);
    assert_eq!(code, 1);
    assert_eq!(out, "h = 0,0,1 symmetric: no\n");
}

#[test]
fn midpoint_subdivision() {
    let ws = Workspace::new();
    let doc = r#"{"kind":"triangulation","n":1,"vertices":[["1","0"],["0","1"],["1/2","1/2"]],"maximal":[[0,2],[2,1]]}"#;
    assert_eq!(run(&ws, doc, &["toric", "hpoly"]), (0, "h = -t\npalindromic: yes\n".into()));
    assert_eq!(run(&ws, doc, &["toric", "gpoly:2"]), (0, "g[2] = -1 - t\npalindromic: yes\n".into()));
    assert_eq!(run(&ws, doc, &["toric", "gpoly:0"]).0, 0);
    let bad = r#"{"kind":"triangulation","n":1,"vertices":[["1","0"],["0","1"],["2/3","2/3"]],"maximal":[[0,2],[2,1]]}"#;
    assert_eq!(run(&ws, bad, &["toric", "hpoly"]).0, 2);
}

#[test]
fn cone_reports() {
    let ws = Workspace::new();
    let cone = r#"{"kind":"fan","rays":[[1,0],[1,2]]}"#;
    let (code, out) = run(&ws, cone, &["toric", "ppoly"]);
    assert_eq!((code, out.as_str()), (0, "p[0] = 0\np[1] = 0\np[0,1] = t\n"));
    let (code, out) = run(&ws, cone, &["toric", "resolve"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("smooth: yes\n"), "{out}");
    for strategy in ["min-sum", "min-max"] {
        let (code, out) = run(&ws, cone, &["toric", "dual", "--strategy", strategy]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("pass: yes"), "{out}");
    }
    // the unrefined cone seen as a fan over itself
    let face_fan = r#"{"kind":"fan","rays":[[1,0],[1,2]],"cone":[[1,0],[1,2]]}"#;
    let (_, out) = run(&ws, face_fan, &["toric", "ppoly"]);
    assert_eq!(out, "p[0] = 0\np[1] = 0\np[0,1] = 0\n");
    let not_refining = r#"{"kind":"fan","rays":[[1,0],[0,1]],"cone":[[1,0],[1,2]]}"#;
    assert_eq!(run(&ws, not_refining, &["toric", "ppoly"]).0, 2);
}

#[test]
fn cover_reports() {
    let ws = Workspace::new();
    let doc = r#"{"kind":"cover","d":6,"p":[2,3]}"#;
    assert_eq!(run(&ws, doc, &["cover", "lattice"]), (0, "1/3 0\n0 1/2\nindex: 6\n".into()));
    let (code, out) = run(&ws, doc, &["cover", "restrict:1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1/2\nreduced spec: (2; 3)\ngroup map: zeta -> zeta^3\nmatches reduced spec: yes\n");
    let four = r#"{"kind":"cover","d":4,"p":[2,6]}"#;
    assert_eq!(
        run(&ws, four, &["cover", "components"]),
        (0, "components: 2\ndegree: 2\nreduced spec: (2; 1,3)\n".into())
    );
    assert_eq!(run(&ws, doc, &["cover", "complete:3,5"]), (0, "3 5\n1 2\ndet: 1\n".into()));
    assert_eq!(run(&ws, doc, &["cover", "complete:2,4"]).0, 2);
    assert_eq!(run(&ws, doc, &["cover", "restrict:3"]).0, 2);
}

#[test]
fn arc_comparison_table() {
    let ws = Workspace::new();
    let doc = r#"{"kind":"arc-task","q":3,"n":3,"d":2,"exps":[2,1]}"#;
    let (code, out) = run(&ws, doc, &["arcs"]);
    assert_eq!(code, 0, "{out}");
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.ends_with("yes")), "{out}");
    let single = r#"{"kind":"arc-task","q":3,"n":2,"d":2,"exps":[2,1],"mode":"monic"}"#;
    assert_eq!(run(&ws, single, &["arcs"]), (0, "count: 72\n".into()));
}

#[test]
fn arc_budget_exits_three() {
    let ws = Workspace::new();
    let doc = r#"{"kind":"arc-task","q":7,"n":40,"d":3,"exps":[1,1,1],"mode":"ord"}"#;
    assert_eq!(run(&ws, doc, &["arcs"]).0, 3);
}

#[test]
fn json_reports_parse() {
    let ws = Workspace::new();
    let p = ws.file("xy.json", XY);
    let out = motivic(&["--json", "check", p.to_str().unwrap(), "selfdual"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["lhs"], v["rhs"]);
    let arcs = ws.file("arcs.json", r#"{"kind":"arc-task","q":2,"n":2,"d":1,"exps":[2]}"#);
    let out = motivic(&["arcs", "--json", arcs.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["ok"] == true && r["lhs"].is_string()));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    let arcs = ws.file("arcs.json", r#"{"kind":"arc-task","q":3,"n":3,"d":2,"exps":[2,1]}"#);
    let a = motivic(&["arcs", arcs.to_str().unwrap()]).stdout;
    let b = motivic(&["--sequential", "arcs", arcs.to_str().unwrap()]).stdout;
    assert_eq!(a, b);
    let s1 = motivic(&["sweep", "--count", "15", "--cones", "4", "--seed", "9"]);
    let s2 = motivic(&["sweep", "--count", "15", "--cones", "4", "--seed", "9", "--sequential"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn unit_twist_table() {
    let out = motivic(&["twist", "--q", "3,4,7", "--cubic", "0,-1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("q = 3: "));
    assert!(lines[2].ends_with("untwisted 8, twisted 4, differ: yes"), "{text}");
}
