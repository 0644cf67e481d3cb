use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn treetwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treetwist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = treetwist(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn eval_examples() {
    let v = json(&["eval", "grigorchuk", "a*a", "--depth", "6"]);
    assert_eq!(v["identity"], true);
    assert_eq!(v["stabilizer_depth"], 6);

    let v = json(&["eval", "gupta-sidki", "x^-1*g^-1*x*g", "--depth", "3"]);
    assert_eq!(v["stabilizer_depth"], 1);
    assert_eq!(v["levels"][2]["fixed"], 0);

    let v = json(&["eval", "grigorchuk", "", "--depth", "3"]);
    assert_eq!(v["identity"], true);
    assert_eq!(v["portrait"]["depth"], 3);
}

#[test]
fn eval_rejects_bad_input() {
    assert_eq!(code(&treetwist(&["eval", "grigorchuk", "a*(b", "--depth", "2"])), 2);
    assert_eq!(code(&treetwist(&["eval", "grigorchuk", "q", "--depth", "2"])), 2);
    assert_eq!(code(&treetwist(&["eval", "no-such-group", "a"])), 2);
    assert_eq!(code(&treetwist(&["eval", "grigorchuk", "a", "--depth", "0"])), 2);
}

#[test]
fn presentation_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, treetwist::selfsim::grigorchuk().canonical_text()).unwrap();
    let v = json(&["eval", path.to_str().unwrap(), "b*c*d", "--depth", "5"]);
    assert_eq!(v["identity"], true);
}

#[test]
fn quotient_rows() {
    let out = treetwist(&["quotient", "grigorchuk", "--dmax", "2", "--spec", "identity", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(usize, usize, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<usize> = l.split(',').take(3).map(|c| c.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect();
    assert_eq!(rows, vec![(1, 2, 2), (2, 8, 5)]);

    let v = json(&["quotient", "grigorchuk", "--dmax", "4"]);
    let classes: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["classes"].as_u64().unwrap()).collect();
    assert_eq!(classes.len(), 4);
    assert!(classes.windows(2).all(|w| w[0] <= w[1]), "{classes:?}");
}

#[test]
fn quotient_logs_well_definedness() {
    let out = treetwist(&["quotient", "gupta-sidki", "--dmax", "2", "--spec", "tau1"]);
    assert!(out.status.success());
    let log = String::from_utf8(out.stderr).unwrap();
    assert!(log.contains("depth 2: induced map checked multiplicative"), "{log}");
}

#[test]
fn quotient_cap_is_marked() {
    let out = treetwist(&["quotient", "grigorchuk", "--dmax", "4", "--cap", "200", "--format", "json"]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.last().unwrap()["status"], "cap-exceeded");
    assert_eq!(rows.len(), 4);
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let plain = treetwist(&["quotient", "grigorchuk", "--dmax", "3", "--format", "json"]);
    let cold = treetwist(&["quotient", "grigorchuk", "--dmax", "3", "--format", "json", "--cache", cache]);
    let warm = treetwist(&["quotient", "grigorchuk", "--dmax", "3", "--format", "json", "--cache", cache]);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 3);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
}

fn certify(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut all = vec!["certify"];
    all.extend(args);
    all.extend(["--out", path.to_str().unwrap()]);
    let out = treetwist(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = certify(dir.path(), "c.json", &["grigorchuk", "--kind", "binary", "--k", "3", "--spec", "identity"]);
    let v = json(&["verify", &cert, "--depth", "4"]);
    assert_eq!(v["result"]["verdict"], "sound");

    // shallower quotient: every invariant holds but the last entry is unchecked
    let out = treetwist(&["verify", &cert, "--depth", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("partially verified"));
}

#[test]
fn locally_normal_gupta_sidki() {
    let dir = tempfile::tempdir().unwrap();
    let cert = certify(
        dir.path(),
        "ln.json",
        &["gupta-sidki", "--kind", "locally-normal", "--n", "2", "--spec", "tau1"],
    );
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(c["notes"][0].as_str().unwrap().contains("H(v0) order 3"));
    assert_eq!(code(&treetwist(&["verify", &cert, "--depth", "3"])), 0);
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = certify(dir.path(), "c.json", &["grigorchuk", "--kind", "binary", "--k", "3", "--spec", "identity"]);
    let text = std::fs::read_to_string(&cert).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["entries"][1]["word"] = Value::from("b*a*b");
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&v).unwrap()).unwrap();
    let out = treetwist(&["verify", tampered.to_str().unwrap(), "--depth", "4"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("unsound"));

    std::fs::write(&tampered, "{ not json").unwrap();
    assert_eq!(code(&treetwist(&["verify", tampered.to_str().unwrap()])), 2);
}

#[test]
fn failed_preconditions_exit_2() {
    let out = treetwist(&["certify", "gupta-sidki", "--kind", "binary", "--k", "1"]);
    assert_eq!(code(&out), 2);
    let out = treetwist(&["certify", "gupta-sidki", "--kind", "strongly-saturated", "--k", "1", "--spec", "tau1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("assumption violated"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["certify", "grigorchuk", "--kind", "binary", "--k", "2", "--format", "json"][..],
        &["check", "gupta-sidki", "--seed", "11", "--samples", "30", "--depth", "3", "--format", "json"],
        &["quotient", "gupta-sidki", "--dmax", "2", "--spec", "tau2", "--format", "csv"],
    ] {
        let a = treetwist(args);
        let b = treetwist(args);
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn random_checks_pass() {
    let v = json(&["check", "grigorchuk", "--seed", "3", "--samples", "50", "--spec", "family:2"]);
    assert_eq!(v["failed"], 0);
    let v = json(&["check", "gupta-sidki", "--seed", "3", "--samples", "50", "--depth", "4", "--spec", "tau3"]);
    assert_eq!(v["failed"], 0);
}
