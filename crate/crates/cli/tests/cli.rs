use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hypdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypdiv")).args(args).output().expect("spawn hypdiv")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "fixtures", "graphs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn decompose_in_range() {
    let out = hypdiv(&["decompose", "--g", "2", "--n", "14", "--variant", "unordered"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let zeros: Vec<(u64, u64)> = v["zeros"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap(), p[1].as_u64().unwrap()))
        .collect();
    assert_eq!(zeros, vec![(1, 1), (2, 0), (2, 1)]);
}

#[test]
fn decompose_without_default_parameter() {
    let out = hypdiv(&["decompose", "--g", "2", "--n", "3", "--variant", "unordered"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn decompose_explicit_t_outside_range() {
    let out = hypdiv(&["decompose", "--g", "2", "--n", "5", "--t", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn kodaira_regime() {
    let out = hypdiv(&["kodaira", "--g", "3", "--n", "4", "--space", "ordered"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["regime"], "1");
    let out = hypdiv(&["kodaira", "--g", "2", "--n", "3"]);
    assert_eq!(json(&out)["regime"], "-inf");
}

#[test]
fn cone_value() {
    let out = hypdiv(&["cone", "--g", "2", "--k", "10", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ft_d"], "-252");
    let out = hypdiv(&["cone", "--g", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn age_exception() {
    let out = hypdiv(&["age", "--case", "A2", "--r", "5", "--ell", "4", "--fixed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["age"], "3/4");
    assert_eq!(v["is_quasi_reflection"], false);
}

#[test]
fn age_rejects_bad_orbit_count() {
    let out = hypdiv(&["age", "--case", "A1", "--r", "5", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cover_age_fixture() {
    let out = hypdiv(&["cover-age", "--graph", &fixture("elliptic_tail_j0.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total_age"], "2/3");
    assert_eq!(v["noncanonical"], true);
}

#[test]
fn cover_age_bad_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    std::fs::write(&p, "{\"components\": 3}").unwrap();
    let out = hypdiv(&["cover-age", "--graph", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn logan_and_extremality() {
    let out = hypdiv(&["logan", "--g", "3", "--n", "5", "--eps", "1/100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["e_irr"], v["closed_form"]);
    let out = hypdiv(&["extremality", "--g", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["determinant"], "20");
}

#[test]
fn intersect_single_curve() {
    let out = hypdiv(&["intersect", "--g", "2", "--n", "6", "--curve", "0:"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pairings"][0]["value"], "-4");
    let out = hypdiv(&["intersect", "--g", "2", "--n", "6", "--curve", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file_and_format_guard() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("k.json");
    let out = hypdiv(&["kodaira", "--g", "3", "--n", "4", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["g"], 3);
    let out = hypdiv(&["kodaira", "--g", "3", "--n", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_deterministic_across_threads() {
    let args = ["scan", "--g-range", "2..4", "--n-range", "3..20", "--space", "Hhat", "--format", "csv"];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hypdiv")).env("HYPDIV_THREADS", threads).args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let lines: Vec<&str> = one.lines().collect();
    assert_eq!(lines[0], "g,n,space,pairing,regime,zero_set");
    assert_eq!(lines.len(), 1 + 3 * 18);
    assert!(lines[1].starts_with("2,3,"));
}

#[test]
fn bad_thread_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypdiv"))
        .env("HYPDIV_THREADS", "0")
        .args(["kodaira", "--g", "2", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_range() {
    let out = hypdiv(&["scan", "--g-range", "5..2", "--n-range", "3..4"]);
    assert_eq!(out.status.code(), Some(2));
}
