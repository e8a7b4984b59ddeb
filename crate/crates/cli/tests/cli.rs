use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deodhar")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_deodhar"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn payload(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["status"], "success");
    doc["payload"].clone()
}

fn coordinate(p: &Value, subset: &[u64]) -> String {
    p.as_array()
        .unwrap()
        .iter()
        .find(|e| e["subset"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).eq(subset.iter().copied()))
        .unwrap()["value"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn plucker_fixture_table() {
    let go33 = fixture("go33.json");
    let w33 = fixture("w33.json");
    let p = payload(&run(&["plucker", "--diagram", &go33, "--weights", &w33]));
    assert_eq!(p.as_array().unwrap().len(), 20);
    assert_eq!(coordinate(&p, &[1, 2, 3]), "1/1");
    assert_eq!(coordinate(&p, &[1, 3, 5]), "-1/1");
    assert_eq!(coordinate(&p, &[2, 5, 6]), "-2/1");
    assert_eq!(coordinate(&p, &[4, 5, 6]), "-2/1");
    assert_eq!(coordinate(&p, &[2, 3, 6]), "4/1");
    let subsets: Vec<Value> = p.as_array().unwrap().iter().map(|e| e["subset"].clone()).collect();
    let mut sorted = subsets.clone();
    sorted.sort_by_key(|s| s.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect::<Vec<_>>());
    assert_eq!(subsets, sorted);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let go33 = fixture("go33.json");
    let a = run(&["plucker", "--diagram", &go33, "--seed", "11"]);
    let b = run(&["plucker", "--diagram", &go33, "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let wld = fixture("wld-parallel-3-8.json");
    let a = run(&["wld", "monodromy", "--wld", &wld, "--family", "parallel"]);
    let b = run(&["wld", "monodromy", "--wld", &wld, "--family", "parallel"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn monodromy_fixture() {
    let wld = fixture("wld26.json");
    let r = payload(&run(&["wld", "monodromy", "--wld", &wld, "--family", "parallel"]));
    assert_eq!(r["total_sign"], -1);
    assert_eq!(r["diagrams"].as_array().unwrap().len(), 7);
    assert_eq!(r["charts"][0], serde_json::json!([1, 2]));
    assert_eq!(r["charts"][5], serde_json::json!([1, 3]));
    assert!(r["steps"].as_array().unwrap().iter().all(|s| s["sign"] == 1 && s["realized"] == true));
    let text = run(&["wld", "monodromy", "--wld", &wld, "--family", "series", "--format", "ascii"]);
    assert!(String::from_utf8(text.stdout).unwrap().ends_with("total: -1\n"));
}

#[test]
fn rotate_lists_the_trace() {
    let wld = fixture("wld26.json");
    let r = payload(&run(&["wld", "rotate", "--wld", &wld, "--family", "series"]));
    assert_eq!(r["sigma"], "21");
    assert_eq!(r["diagrams"][3]["propagators"], serde_json::json!([[4, 6], [2, 6]]));
}

#[test]
fn diagram_check() {
    let r = payload(&run(&["diagram", "check", "--diagram", &fixture("rect23.json")]));
    assert_eq!(r["valid"], true);
    assert_eq!(r["dimension"], r["boxes"]);
    let r = payload(&run(&["diagram", "check", "--diagram", &fixture("invalid.json")]));
    assert_eq!(r["valid"], false);
    assert_eq!(r["offending"][0], "(2,4) BlackIncreases");
}

#[test]
fn render_reads_stdin() {
    let json = std::fs::read_to_string(fixture("go33.json")).unwrap();
    let out = run_stdin(&["diagram", "render", "--diagram", "-", "--format", "ascii"], &json);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "  1 | + b +\n  2 | b + o\n  3 | + o +\n");
}

#[test]
fn ib_routes_agree() {
    let go33 = fixture("go33.json");
    for b in ["1,4", "1,5", "1,6", "2,4", "2,5", "2,6", "3,4", "3,5", "3,6"] {
        let r = payload(&run(&["ib", "--diagram", &go33, "--box", b]));
        assert_eq!(r["agree"], true, "box {b}");
    }
}

#[test]
fn fiber_commands() {
    let base = fixture("fiber22.json");
    let list = payload(&run(&["fiber", "list", "--diagram", &base]));
    assert_eq!(list.as_array().unwrap().len(), 6);
    let poset = payload(&run(&["fiber", "poset", "--diagram", &base]));
    assert_eq!(poset["covers"].as_array().unwrap().len(), 7);
    assert_eq!(poset["rank_profile"], serde_json::json!([1, 2, 2, 1]));
    let top = payload(&run(&["fiber", "top", "--diagram", &base]));
    assert_eq!(top["dimension"], 7);
    let point = fixture("point22.json");
    let c = payload(&run(&["classify", "--diagram", &base, "--pluckers", &point]));
    assert_eq!(c["new_column"], serde_json::json!(["+", "b", "+"]));
    let nonneg = payload(&run(&["fiber", "nonneg", "--diagram", &fixture("dw.json")]));
    assert_eq!(nonneg["boolean_lattice"], true);
    assert_eq!(nonneg["nodes"].as_array().unwrap().len(), 2);
}

#[test]
fn wilson_fixture_commands() {
    let wld = fixture("wld26.json");
    assert_eq!(payload(&run(&["wld", "admissible", "--wld", &wld]))["admissible"], true);
    let cell = payload(&run(&["wld", "cell", "--wld", &wld]));
    assert_eq!(cell["dimension"], 6);
    assert_eq!(cell["le_diagram"]["filling"], serde_json::json!([["+", "+", "o", "+"], ["o", "+", "+", "+"]]));
    assert_eq!(payload(&run(&["wld", "dstar", "--wld", &wld]))["dimension"], 8);
    assert_eq!(payload(&run(&["wld", "positivity", "--wld", &wld]))["violation"], true);
    let minor = payload(&run(&["wld", "minor", "--wld", &wld, "--col-set", "1,3"]));
    assert_eq!(minor["minor"], "c_{1,1}*c_{2,3}");
    let all = payload(&run(&["wld", "boundary", "--wld", &wld]));
    assert!(!all.as_array().unwrap().is_empty());
    let real = payload(&run(&["wld", "realize", "--wld", &wld, "--seed", "3"]));
    assert_eq!(real["matrix"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    let bad = run(&["diagram", "check", "--nope"]);
    assert_eq!(bad.status.code(), Some(2));
    let malformed = run_stdin(&["diagram", "check", "--diagram", "-"], "{not json");
    assert_eq!(malformed.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&malformed.stdout).unwrap();
    assert_eq!(doc["status"], "error");
    assert!(!doc["diagnostics"].as_array().unwrap().is_empty());
    let schema = run_stdin(&["wld", "cell", "--wld", "-"], r#"{"n": 6, "propagators": [[1, 9]]}"#);
    assert_eq!(schema.status.code(), Some(2));
    let inadmissible = run_stdin(&["wld", "cell", "--wld", "-"], r#"{"n": 6, "propagators": [[1, 3], [2, 4]]}"#);
    assert_eq!(inadmissible.status.code(), Some(2));
    let rejected = run_stdin(
        &["wld", "boundary", "--wld", "-", "--propagator", "1", "--vertex", "5"],
        r#"{"n": 6, "propagators": [[1, 4], [1, 3]]}"#,
    );
    assert_eq!(rejected.status.code(), Some(3));
}
