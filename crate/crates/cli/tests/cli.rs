use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn difflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_difflat")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_lattice(dir: &Path, family: &str, size: Option<&str>) -> PathBuf {
    let mut args = vec!["gen", family];
    args.extend(size);
    let out = difflat(&args);
    assert!(out.status.success());
    let path = dir.join(format!("{family}{}.json", size.unwrap_or("")));
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn show_renders_two_row_tables() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_lattice(dir.path(), "chain", Some("4"));
    let out = difflat(&["show", c4.to_str().unwrap(), "--derivation", "0 u v u"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "( 0 u v 1 )\n( 0 u v u )\n");

    let m4 = write_lattice(dir.path(), "diamond", Some("4"));
    let out = difflat(&["show", m4.to_str().unwrap(), "--derivation", "0,b1,b2,b1", "--dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("(  0 b1 b2  1 )\n(  0 b1 b2 b1 )\n"));
    assert!(text.contains("3 -> 1 [style=dashed"));
}

#[test]
fn show_names_the_violated_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_lattice(dir.path(), "chain", Some("4"));
    let out = difflat(&["show", c4.to_str().unwrap(), "--derivation", "u u v 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d(0) = 0"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3,\n \"covers\": [[0, 1] [1, 2]]}").unwrap();
    let out = difflat(&["derivations", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("line 2") && err.contains("column"), "{err}");
}

#[test]
fn derivation_listing_and_counts() {
    let dir = tempfile::tempdir().unwrap();
    let m5 = write_lattice(dir.path(), "diamond", Some("5"));
    let out = difflat(&["derivations", m5.to_str().unwrap(), "--count"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 21);
    let out = difflat(&["derivations", m5.to_str().unwrap(), "--isotone-only"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 5);
    assert!(v["derivations"].as_array().unwrap().iter().all(|d| d["isotone"] == true));
    let out = difflat(&["derivations", m5.to_str().unwrap(), "--format", "table", "--count"]);
    assert_eq!(stdout(&out).trim(), "21");
}

#[test]
fn classify_reports_classes() {
    let dir = tempfile::tempdir().unwrap();
    let m5 = write_lattice(dir.path(), "diamond", Some("5"));
    let out = difflat(&["classify", m5.to_str().unwrap(), "--witnesses"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class_count"], 8);
    assert_eq!(v["automorphisms"], 6);
    assert!(v["classes"][0]["witnesses"].is_array());
}

#[test]
fn doposet_checks_and_draws() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_lattice(dir.path(), "chain", Some("4"));
    let dot = dir.path().join("do.dot");
    let out = difflat(&["doposet", c4.to_str().unwrap(), "--check-lattice", "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["size"], 8);
    assert_eq!(v["is_lattice"], true);
    assert_eq!(v["covers"].as_array().unwrap().len(), 8);
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph \"DO(C_4)\""));
    assert!(text.contains("label=\"0,u,v,u\""));
}

#[test]
fn catalog_writes_json_lines_and_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("five.jsonl");
    let cache = dir.path().join("cache");
    let out = Command::new(env!("CARGO_BIN_EXE_difflat"))
        .args(["catalog", "--order", "5", "--filter", "modular", "--out", out_path.to_str().unwrap()])
        .env("DIFFLAT_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    let summary: Value = serde_json::from_str(lines[4]).unwrap();
    assert_eq!(summary["summary"]["count"], 4);
    assert_eq!(summary["summary"]["filter"], "modular");
    assert!(cache.join("lattices-5.jsonl").exists());

    let out = difflat(&["catalog", "--order", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjecture_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = difflat(&["conjecture", "--max-order", "6", "--jobs", "2", "--report", report.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["lattices_checked"], 25);
    let first = &v["lattices"][0];
    for field in ["order", "canonical_key", "do_size", "do_is_lattice", "do_poset_canonical_key"] {
        assert!(first.get(field).is_some(), "{field}");
    }
}

#[test]
fn verify_exit_codes() {
    let out = difflat(&["verify", "quick", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let ids: Vec<&str> = v["claims"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"thm-chain-count") && ids.contains(&"conj-probe"));

    let out = difflat(&["verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = difflat(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_outputs_are_deterministic() {
    let a = difflat(&["gen", "boolean", "3"]);
    let b = difflat(&["gen", "boolean", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let dot = difflat(&["gen", "pentagon", "--dot"]);
    assert!(stdout(&dot).contains("rankdir=BT"));
    assert_eq!(difflat(&["gen", "chain"]).status.code(), Some(2));
}
