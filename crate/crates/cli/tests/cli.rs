use serde_json::Value;
use std::process::{Command, Output};

const F16: &str = "2,4,2,1,19";

fn skewmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewmat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let o = skewmat(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&ok(&all)).expect("valid json")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["--field", "2,2,1,1", "mul", "x+1", "g1*x+1"]), "g2*x^2 + g2*x + 1");
    assert_eq!(ok(&["--field", F16, "closure", "1,g3"]), "1, g3, g6, g9, g12");
    assert_eq!(ok(&["--field", F16, "pindep", "1,g3,g6"]), "false");
}

#[test]
fn ring_verbs() {
    let f4 = ["--field", "2,2,1,1"];
    let run = |rest: &[&str]| ok(&[&f4[..], rest].concat());
    assert_eq!(run(&["divmod", "x^4+x^2+1", "x^2+g1"]), "quotient: x^2 + g2\nremainder: 0");
    assert_eq!(run(&["grcd", "x^4+x^2+1", "x^2+g1"]), "x^2 + g1");
    assert_eq!(run(&["llcm", "x+1", "x+g1"]), "x^2 + 1");
    assert_eq!(run(&["eval", "x^4+x^2+1", "g1"]), "1");
    assert_eq!(run(&["zeros", "x^2+1"]), "1, g1, g2");
    let printed = run(&["mul", "g1*x^3+x", "x^2+g2"]);
    assert_eq!(run(&["mul", &printed, "1"]), printed);
}

#[test]
fn class_verbs() {
    assert_eq!(ok(&["--field", F16, "classof", "g7"]), "C(g1)");
    assert_eq!(ok(&["--field", F16, "classof", "0"]), "C(0)");
    assert_eq!(ok(&["--field", F16, "classelems", "2"]), "g2, g5, g8, g11, g14");
    assert_eq!(ok(&["--field", F16, "classelems", "zero"]), "0");
    let m1 = ok(&["--field", F16, "unwarp", "g9", "--method", "1"]);
    let m2 = ok(&["--field", F16, "unwarp", "g9", "--method", "2"]);
    // φ(γ^3) = γ^9; method 2 gives (γ^9)^2 = γ^18 = γ^3
    assert_eq!(m1, "g3");
    assert_eq!(m2, "g3");
    assert_eq!(json(&["--field", F16, "unwarp", "g7"])["class"], 1);
}

#[test]
fn minimal_and_matroid_verbs() {
    assert_eq!(ok(&["--field", "2,2,1,1", "minpoly", "1,g1"]), "x^2 + 1");
    assert_eq!(ok(&["--field", F16, "pbasis", "1,g3,g6,g9,g12"]), "1, g3");
    assert_eq!(ok(&["--field", F16, "rank", "1,g3,g1,g4"]), "4");
    assert_eq!(ok(&["--field", F16, "flatclose", "1,g3"]), "1, g3, g6, g9, g12 (rank 2)");
    assert_eq!(ok(&["--field", F16, "dist", "1", "g3"]), "2");
    assert_eq!(json(&["--field", F16, "flats", "--class", "0"])["count"], 7);
    assert_eq!(json(&["--field", "2,2,1,1", "flats", "--whole"])["count"], 10);
    assert_eq!(json(&["--field", F16, "flats", "--class", "0", "--max-rank", "1"])["count"], 6);
    let rep = json(&["--field", F16, "repmatrix"]);
    assert_eq!(rep["a"], serde_json::json!([["1", "0", "g5", "g5", "1"], ["0", "1", "1", "g10", "1"]]));
    assert_eq!(rep["script_a"].as_array().unwrap().len(), 7);
    let text = ok(&["--field", F16, "repmatrix"]);
    assert!(text.starts_with("modpoly x^4 + x + 1 (19), basis 1, g1"), "{text}");
    assert_eq!(json(&["--field", "2,3,1,1", "isometry-check"])["passed"], true);
}

#[test]
fn fieldinfo_json_keys_are_stable() {
    let v = json(&["--field", F16, "fieldinfo"]);
    assert_eq!(v["q"], 4);
    assert_eq!(v["class_size"], 5);
    assert_eq!(v["modpoly"], 19);
    let again = ok(&["--json", "--field", F16, "fieldinfo"]);
    assert_eq!(again, ok(&["--json", "--field", F16, "fieldinfo"]));
}

#[test]
fn exit_codes() {
    assert_eq!(skewmat(&["nonsense"]).status.code(), Some(2));
    assert_eq!(skewmat(&["closure", "1"]).status.code(), Some(2));
    assert_eq!(skewmat(&["--field", F16, "mul", "x+", "1"]).status.code(), Some(2));
    assert_eq!(skewmat(&["--field", F16, "closure", "h3"]).status.code(), Some(2));
    let domain = skewmat(&["--field", "4,2,1,1", "fieldinfo"]);
    assert_eq!(domain.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&domain.stderr).contains("NonPrimeP"));
    let dist = skewmat(&["--field", F16, "dist", "1,g3", "1"]);
    assert_eq!(dist.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&dist.stderr).contains("NotAFlat"));
    assert_eq!(skewmat(&["--field", "2,5,1,2", "rank", "1"]).status.code(), Some(1));
    assert_eq!(skewmat(&["--field", F16, "classelems", "3"]).status.code(), Some(1));
}

#[test]
fn selftest_passes_and_reports_bad_modpoly() {
    let out = ok(&["selftest"]);
    assert!(out.ends_with("passed, 0 failed"), "{out}");
    assert!(!out.contains("FAIL"));
    let listed = json(&["selftest"]);
    assert!(listed["passed"].as_array().unwrap().len() > 30);
    assert_eq!(listed["failed"].as_array().unwrap().len(), 0);
    let bad = skewmat(&["--field", "2,4,2,1,31", "selftest"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("NonPrimitiveModpoly"));
}

#[test]
fn simulate_is_deterministic_and_matches_rlnc() {
    let spec = data("diamond.json");
    let a = json(&["simulate", "--spec", &spec, "--trials", "2000"]);
    let b = json(&["simulate", "--spec", &spec, "--trials", "2000"]);
    assert_eq!(a, b);
    let rate = a["success_rate"].as_f64().unwrap();
    assert!(rate > 0.0 && rate < 1.0);
    assert_eq!(a["containment_violations"], 0);
    let r = json(&["simulate", "--spec", &spec, "--trials", "2000", "--oracle", "rlnc"]);
    assert_eq!(a["success_rate"], r["success_rate"]);
    assert_eq!(a["mean_distance"], r["mean_distance"]);
    let other = json(&["--seed", "1", "simulate", "--spec", &spec, "--trials", "2000"]);
    assert_ne!(other["per_sink"][0]["successes"], a["per_sink"][0]["successes"]);
    let empty = json(&["simulate", "--spec", &spec, "--trials", "0"]);
    assert_eq!(empty["success_rate"], Value::Null);
}

#[test]
fn simulate_rejects_bad_specs() {
    let bad = skewmat(&["simulate", "--spec", &data("cyclic.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("SpecInvalid"));
    assert_eq!(skewmat(&["simulate", "--spec", "/nonexistent.json"]).status.code(), Some(2));
}
