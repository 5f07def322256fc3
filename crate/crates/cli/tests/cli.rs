//! The `qpw` binary: output documents and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qpw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpw")).args(args).output().unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

const TRIANGLE: &str = r#"{"n":3,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":2,"tgt":3},
{"id":"c","src":3,"tgt":1}],"potential":[{"coef":1,"cycle":["a","b","c"]}]}"#;
const KRONECKER3: &str =
    r#"{"n":2,"arrows":[{"id":"a","src":1,"tgt":2},{"id":"b","src":1,"tgt":2},{"id":"c","src":1,"tgt":2}]}"#;

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_and_mutate() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(&dir, "tri.json", TRIANGLE);
    let out = qpw(&["classify", &tri]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["type"], "Dynkin A_3");

    let out = qpw(&["mutate", "-k", "2", &tri]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["n"], 3);

    let out = qpw(&["mutate", "-k", "99", &tri]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qpw(&["classify", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(qpw(&["mutate", "x.json"]).status.code(), Some(2));
}

#[test]
fn malformed_and_missing_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "{\"n\": 2, \"arrows\": [");
    assert_eq!(qpw(&["classify", &bad]).status.code(), Some(1));
    assert_eq!(qpw(&["classify", "/nonexistent/q.json"]).status.code(), Some(1));
}

#[test]
fn witness_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(&dir, "k3.json", KRONECKER3);
    let cert_path = dir.path().join("cert.json").display().to_string();
    let out = qpw(&["witness", &k3, "-k", "3", "-o", &cert_path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["status"], "witness");

    let out = qpw(&["verify", &cert_path]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["ok"], true);

    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    cert["thetaLifted"][0] = Value::from(7);
    let forged = write(&dir, "forged.json", &cert.to_string());
    let out = qpw(&["verify", &forged]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["ok"], false);
}

#[test]
fn dynkin_input_is_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(&dir, "tri.json", TRIANGLE);
    let out = qpw(&["witness", &tri]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["status"], "dynkin-no-witness");
}

#[test]
fn stable_takes_negative_weights() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(&dir, "k3.json", KRONECKER3);
    let rep = write(&dir, "rep.json", r#"{"field":"F3","dims":[1,1],"mats":{"a":[[1]],"b":[[2]],"c":[[0]]}}"#);
    let out = qpw(&["stable", "--theta", "1,-1", &rep, &k3]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["stable"], true);
    let out = qpw(&["stable", "--theta", "-1,1", &rep, &k3]);
    assert_eq!(stdout_json(&out)["stable"], false);
}

#[test]
fn output_is_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(&dir, "k3.json", KRONECKER3);
    let a = qpw(&["witness", &k3, "-k", "4"]).stdout;
    let b = qpw(&["witness", &k3, "-k", "4"]).stdout;
    assert_eq!(a, b);
}
