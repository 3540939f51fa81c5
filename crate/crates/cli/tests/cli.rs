use std::process::{Command, Output};

fn frob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frob")).args(args).env_remove("FROB_WORKERS").output().expect("frob runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn census_below_norm_four_is_empty() {
    let o = frob(&["census", "--norm", "3", "--through"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("norm,count_M,count_H"));
    for (n, line) in lines.enumerate() {
        assert_eq!(line, format!("{n},0,0"));
    }
}

#[test]
fn census_jsonl_matches_csv_count() {
    let rows = stdout(&frob(&["census", "--dim", "2", "--norm", "3", "--emit", "jsonl"]));
    let hyperbolic = rows
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["class"] == "H")
        .count();
    let csv = stdout(&frob(&["census", "--dim", "2", "--norm", "3"]));
    let h: usize = csv.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert_eq!(hyperbolic, h);
}

#[test]
fn counterexample_has_mod_seven_obstruction() {
    let o = frob(&["frobenius", "--matrix", "1,2,0;0,1,2;-7,0,29"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["verdict"]["status"], "non_frobenius");
    assert_eq!(v["verdict"]["certificate"]["modulus"], 7);
}

#[test]
fn golden_matrix_is_frobenius() {
    let v = json(&frob(&["frobenius", "--matrix", "0,1,0;0,0,1;1,1,0"]));
    assert_eq!(v["verdict"]["status"], "frobenius_type");
}

#[test]
fn classify_norm_five() {
    let o = frob(&["classify", "--norm", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "class,count\ngolden_ratio,48\n");
}

#[test]
fn classify_writes_assignments() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.jsonl");
    let o = frob(&["classify", "--norm", "5", "--no-sail-check", "--jsonl", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 48);
}

#[test]
fn bad_input_exits_one() {
    for m in ["1,2;3", "a,b;c,d", "1,2,3,4;1,2,3,4;1,2,3,4;1,2,3,4"] {
        let o = frob(&["frobenius", "--matrix", m]);
        assert_eq!(o.status.code(), Some(1), "{m}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn zero_workers_is_rejected() {
    assert_eq!(frob(&["--workers", "0", "census", "--norm", "1"]).status.code(), Some(1));
}

#[test]
fn sail_writes_svg_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("s.svg");
    let out = dir.path().join("s.json");
    let o = frob(&[
        "sail",
        "--matrix",
        "0,1,0;0,0,1;1,3,0",
        "--svg",
        svg.to_str().unwrap(),
        "--json",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["invariants"]["face_areas"], serde_json::json!([1, 3]));
    assert!(!doc["vertices"].as_array().unwrap().is_empty());
}

#[test]
fn sail_rejects_elliptic_matrix() {
    // x^3 - 1 has complex roots
    let o = frob(&["sail", "--matrix", "0,1,0;0,0,1;1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn forms_of_quadratic() {
    let v = json(&frob(&["forms", "--matrix", "0,1;1,1"]));
    assert_eq!(v["discriminant"], "5");
}

#[test]
fn forms_tables_for_cubic() {
    let v = json(&frob(&["forms", "--matrix", "1,2,0;0,1,2;-7,0,29", "--factor", "mn"]));
    assert!(v["forms"]["mn"].is_object() || v["forms"]["mn"].is_array());
}

#[test]
fn solve_reports_witness() {
    let o = frob(&["solve", "--matrix", "0,1;1,1"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["result"]["verdict"], "solvable");
}

#[test]
fn commutant_of_companion() {
    let v = json(&frob(&["commutant", "--matrix", "0,1,0;0,0,1;1,1,0"]));
    assert!(v.is_object());
}
