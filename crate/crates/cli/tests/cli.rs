//! End-to-end tests of the `sumflow` binary: exit codes, JSON shape,
//! and document round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sumflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("sumflow-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn gen(family: &str, params: &[&str]) -> PathBuf {
    let mut args = vec!["gen", "--family", family];
    args.extend(params);
    let out = sumflow(&args);
    assert_eq!(out.status.code(), Some(0));
    temp_file(
        &format!("{family}-{}", params.join("-")),
        std::str::from_utf8(&out.stdout).unwrap(),
    )
}

#[test]
fn exists_interval_feasible_and_verifies() {
    let c4 = gen("cycle", &["4"]);
    let out = sumflow(&["exists", c4.to_str().unwrap(), "--gamma", "const:1", "--set", "interval", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["decision"], "feasible");
    assert_eq!(doc["flow"].as_array().unwrap().len(), 4);

    let saved = temp_file("c4-doc.json", &doc.to_string());
    let verify = sumflow(&["verify", c4.to_str().unwrap(), saved.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(json_of(&verify)["decision"], "verified");

    // Perturbing one value must be caught with the violated constraint
    // named.
    let mut bad = doc.clone();
    bad["flow"][0]["value"] = Value::String("2".into());
    let saved = temp_file("c4-bad.json", &bad.to_string());
    let verify = sumflow(&["verify", c4.to_str().unwrap(), saved.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));
    assert!(json_of(&verify)["violation"]
        .as_str()
        .unwrap()
        .contains("vertex"));
}

#[test]
fn exists_unbalanced_star_is_infeasible_with_certificate() {
    let star = gen("star", &["3"]);
    let out = sumflow(&["exists", star.to_str().unwrap(), "--gamma", "const:1", "--set", "interval", "-10,10"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["decision"], "infeasible");
    assert!(doc["certificate"].is_object());

    let saved = temp_file("star-doc.json", &doc.to_string());
    let verify = sumflow(&["verify", star.to_str().unwrap(), saved.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn obstruction_family_rejects_bounded_below_sets() {
    let g = gen("example2", &["1", "1"]);
    let out = sumflow(&["exists", g.to_str().unwrap(), "--gamma", "const:1", "--set", "interval", "-1,inf"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["decision"], "infeasible");
}

#[test]
fn tree_range_reports() {
    let tmin = gen("tmin", &["6"]);
    let out = sumflow(&["tree-range", tmin.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["achieved"], serde_json::json!(["-1", "1"]));

    let star = gen("star", &["4"]);
    let out = sumflow(&["tree-range", star.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_methods() {
    let k4 = gen("complete", &["4"]);
    let out = sumflow(&["construct", k4.to_str().unwrap(), "--method", "zero3flow"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let values: Vec<&str> = doc["flow"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_str().unwrap())
        .collect();
    assert!(values.iter().all(|v| *v == "2" || *v == "-1"));

    let out = sumflow(&["construct", k4.to_str().unwrap(), "--method", "pm1-regular"]);
    assert_eq!(out.status.code(), Some(0));

    let c5 = gen("cycle", &["5"]);
    let out = sumflow(&["construct", c5.to_str().unwrap(), "--method", "kfactor", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json_of(&out)["flow"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["value"] == "1/2"));

    let path = gen("path", &["4"]);
    let out = sumflow(&["construct", path.to_str().unwrap(), "--method", "nowherezero"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_counts_alternations() {
    let c4 = gen("cycle", &["4"]);
    let out = sumflow(&["oracle", c4.to_str().unwrap(), "--list", "0,1", "--c", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["solution_count"], 2);
    assert_eq!(doc["solutions"].as_array().unwrap().len(), 2);

    let out = sumflow(&["oracle", c4.to_str().unwrap(), "--list", "-1,0,49", "--c", "7", "--count-only"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["solution_count"], 0);
}

#[test]
fn parse_errors_exit_two_with_json() {
    let broken = temp_file("broken.g", "2 1\n1 1\n");
    let out = sumflow(&["tree-range", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json_of(&out);
    assert_eq!(doc["decision"], "error");
    assert!(doc["error"].as_str().unwrap().contains("line 2"));

    let out = sumflow(&["gen", "--family", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_round_trips() {
    for (family, params) in [
        ("cycle", vec!["5"]),
        ("circulant", vec!["8", "1,2,3"]),
        ("topt", vec!["10"]),
        ("unicyclic-extremal", vec!["4", "4"]),
    ] {
        let path = gen(family, &params);
        let text = std::fs::read_to_string(&path).unwrap();
        let header = text.lines().next().unwrap();
        let mut parts = header.split_whitespace();
        let n: usize = parts.next().unwrap().parse().unwrap();
        let m: usize = parts.next().unwrap().parse().unwrap();
        assert_eq!(text.lines().count(), m + 1, "{family}");
        assert!(n >= 4);
    }
}
