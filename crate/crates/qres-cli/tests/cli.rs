//! End-to-end checks of the command line tool against its documented input
//! and output contracts: exact JSON, DOT export, stdin fallbacks, and the
//! exit code split between syntax (2) and semantics (1).

use serde_json::{json, Value};
use std::io::Write as _;
use std::process::{Command, Stdio};

const EXE: &str = env!("CARGO_BIN_EXE_qres");
const FIVE_CURVE: &str = "((x^3 - y^2)^2 - x^4*y^3) * (x^3 - y^2) * (x^3 + y^2) * x * y";
const CUSP_PAIR: &str = "(x^2 + y^3) * (x^3 + y^2)";

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(EXE);
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn qres");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.unwrap_or("").as_bytes())
        .unwrap();
    let out = child.wait_with_output().expect("wait for qres");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn run_json(args: &[&str], stdin: Option<&str>) -> Value {
    let (code, stdout, stderr) = run(args, stdin);
    assert_eq!(code, 0, "args {args:?}\nstdout: {stdout}stderr: {stderr}");
    serde_json::from_str(&stdout).expect("JSON on stdout")
}

fn run_err(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let (code, stdout, _) = run(args, stdin);
    assert_ne!(code, 0, "expected failure for {args:?}");
    (code, serde_json::from_str(&stdout).expect("error JSON"))
}

fn rat(num: i64, den: i64) -> Value {
    json!({"num": num, "den": den})
}

fn assert_exact(v: &Value) {
    match v {
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "float in output: {n}"),
        Value::Array(items) => items.iter().for_each(assert_exact),
        Value::Object(map) => map.values().for_each(assert_exact),
        _ => {}
    }
}

#[test]
fn normalize_prints_type_and_exponents() {
    let v = run_json(&["normalize", "--type", "10;2,5"], None);
    assert_eq!(
        v,
        json!({"type": {"d": 1, "a": 0, "b": 0}, "exponents": [5, 2]})
    );
    assert_exact(&v);
}

#[test]
fn hj_prints_the_chain() {
    let v = run_json(&["hj", "--type", "7;1,3"], None);
    assert_eq!(v, json!({"chain": [-3, -2, -2]}));
}

#[test]
fn blowup_reports_charts_and_corrections() {
    let v = run_json(&["blowup", "--type", "5;2,3", "--weight", "2,3"], None);
    assert_eq!(v["e"], json!(5));
    assert_eq!(v["chart1_origin"], json!({"d": 2, "a": 1, "b": 1}));
    assert_eq!(v["chart2_origin"], json!({"d": 3, "a": 2, "b": 1}));
    assert_eq!(v["exc_self_intersection"], rat(-5, 6));
    assert_eq!(v["beta"], json!(3));
    assert_eq!(v["mu"], json!(2));
    assert_exact(&v);
}

#[test]
fn resolve_feeds_intersect_through_a_file() {
    let (code, graph_json, _) = run(&["resolve", "--poly", FIVE_CURVE], None);
    assert_eq!(code, 0);
    let graph: Value = serde_json::from_str(&graph_json).unwrap();
    assert_eq!(graph["vertices"][0]["m"], rat(29, 1));
    assert_eq!(graph["vertices"][1]["m"], rat(73, 1));
    assert_exact(&graph);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("five.json");
    std::fs::write(&path, &graph_json).unwrap();
    let path = path.to_str().unwrap();

    let v = run_json(&["intersect", "--graph", path, "--pair", "1", "2"], None);
    assert_eq!(v, json!({"value": rat(17, 1)}));

    let m = run_json(&["intersect", "--graph", path], None);
    assert_eq!(m["ids"], json!([1, 2]));
    assert_eq!(m["A"][0], json!([rat(-17, 30), rat(1, 5)]));
    assert_eq!(m["B"][1], json!([rat(12, 1), rat(34, 1)]));
    assert_exact(&m);
}

#[test]
fn quotient_resolution_scales_the_pairing() {
    let (code, graph_json, _) = run(&["resolve", "--poly", FIVE_CURVE, "--type", "5;2,3"], None);
    assert_eq!(code, 0);
    let v = run_json(&["intersect", "--pair", "1", "2"], Some(&graph_json));
    assert_eq!(v, json!({"value": rat(17, 5)}));
}

#[test]
fn dot_flag_emits_graphviz() {
    let (code, dot, _) = run(&["resolve", "--poly", FIVE_CURVE, "--dot"], None);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph resolution {"));
    assert!(dot.contains("E_1: m=29, e=-17/30"));
}

#[test]
fn resolve_reads_a_germ_from_stdin() {
    let germ = json!({
        "ambient": {"d": 1, "a": 0, "b": 0},
        "branches": [
            {"terms": [{"coeff": {"num": 1, "den": 1}, "exp": {"num": 3, "den": 2}}]}
        ]
    });
    let v = run_json(&["resolve"], Some(&germ.to_string()));
    assert_eq!(v["vertices"][0]["m"], rat(6, 1));
    assert_eq!(v["vertices"][0]["self_int"], rat(-1, 6));
}

#[test]
fn bezout_prints_exact_global_pairings() {
    let input = json!({"w": [2, 3, 7], "action": [1, 0, 0, 0], "deg1": 6, "deg2": 14});
    let v = run_json(&["bezout"], Some(&input.to_string()));
    assert_eq!(v["value"], rat(2, 1));
    assert_eq!(v["e"], json!(1));
    assert_eq!(v["dpqr"], json!(42));
    assert_exact(&v);
}

#[test]
fn jung_lifts_a_resolved_base() {
    let (code, base_json, _) = run(&["resolve", "--poly", CUSP_PAIR], None);
    assert_eq!(code, 0);
    let base: Value = serde_json::from_str(&base_json).unwrap();
    let surface = json!({"n": 3, "base": base});
    let v = run_json(&["jung"], Some(&surface.to_string()));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["vertices"][0]["self_int"], rat(-1, 10));
    assert_eq!(v["edges"][0]["type"], json!({"d": 15, "a": 1, "b": 11}));
}

#[test]
fn refine_straightens_the_graph() {
    let (code, graph_json, _) = run(&["resolve", "--poly", FIVE_CURVE], None);
    assert_eq!(code, 0);
    let v = run_json(&["refine"], Some(&graph_json));
    assert_eq!(v["vertices"][0]["self_int"], rat(-2, 1));
    assert_eq!(v["vertices"][1]["self_int"], rat(-1, 1));
    for vertex in v["vertices"].as_array().unwrap() {
        if vertex["kind"] == json!("exceptional") {
            assert_eq!(vertex["self_int"]["den"], json!(1), "vertex {vertex}");
        }
    }
}

#[test]
fn syntax_errors_exit_two() {
    let (code, err) = run_err(&["resolve", "--poly", "x^2"], None);
    assert_eq!(code, 2);
    assert_eq!(err["error"], json!("unsupported-factor-shape"));

    let (code, err) = run_err(&["normalize", "--type", "nonsense"], None);
    assert_eq!(code, 2);
    assert_eq!(err["error"], json!("parse-error"));
}

#[test]
fn semantic_errors_exit_one() {
    let (code, graph_json, _) = run(&["resolve", "--poly", FIVE_CURVE], None);
    assert_eq!(code, 0);
    let (code, err) = run_err(&["intersect", "--pair", "1", "1"], Some(&graph_json));
    assert_eq!(code, 1);
    assert_eq!(err["error"], json!("same-branch"));

    let (code, err) = run_err(&["hj", "--type", "4;2,2"], None);
    assert_eq!(code, 1);
    assert_eq!(err["error"], json!("not-normalized"));

    let (code, err) = run_err(&["normalize", "--type", "4;2,2"], None);
    assert_eq!(code, 1);
    assert_eq!(err["error"], json!("non-effective-action"));
}

#[test]
fn missing_arguments_exit_two() {
    let (code, stdout, stderr) = run(&["normalize"], None);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(!stderr.is_empty());
}
