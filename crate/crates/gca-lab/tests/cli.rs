//! Black-box tests of the command-line binary: exit codes, diagnostics for
//! malformed definition documents, report files, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gca-lab")
}

fn write_doc(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

const DEMO: &str = r#"{
  "groups": [{"name": "z4", "kind": "cyclic", "n": 4},
             {"name": "z", "kind": "free-abelian", "rank": 1}],
  "subgroups": [{"name": "k", "group": "z4", "elements": [0, 2]}],
  "homomorphisms": [
    {"name": "id4", "domain": "z4", "codomain": "z4", "builtin": "identity"},
    {"name": "dbl4", "domain": "z4", "codomain": "z4", "images": [0, 2, 0, 2]},
    {"name": "idz", "domain": "z", "codomain": "z", "builtin": "identity"},
    {"name": "dbl", "domain": "z", "codomain": "z", "matrix": [[2]]}
  ],
  "rules": [
    {"name": "xor", "group": "z4", "memory": [0, 1], "builtin": "xor"},
    {"name": "xor02", "group": "z4", "memory": [0, 2], "builtin": "xor"}
  ],
  "gcas": [{"name": "xor4", "phi": "id4", "rule": "xor"},
           {"name": "xor02", "phi": "id4", "rule": "xor02"}]
}"#;

#[test]
fn apply_prints_the_image_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "apply",
        "--gca",
        "xor4",
        "--input",
        "1,0,0,0",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS apply"), "{text}");
    assert!(text.contains("[1,0,0,1]"), "{text}");
}

#[test]
fn equivariance_reports_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "equivariance",
        "--gca",
        "xor4",
        "--psi",
        "dbl4",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no;"), "{text}");
    assert!(text.contains("witness"), "{text}");
}

#[test]
fn delta_classifies_infinite_difference_sets() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "delta",
        "--phi",
        "idz",
        "--psi",
        "dbl",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("infinite"));
}

#[test]
fn transfer_runs_on_a_restrictable_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "transfer",
        "--gca",
        "xor02",
        "--subgroup",
        "k",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("biconditionals"), "{text}");
}

#[test]
fn memory_outside_the_subgroup_image_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "restrict",
        "--gca",
        "xor4",
        "--subgroup",
        "k",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("memory element"), "{err}");
}

#[test]
fn non_associative_table_is_diagnosed_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(
        &dir,
        "bad.json",
        r#"{"groups": [{"name": "loop5", "kind": "cayley",
            "table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],
                      [3,2,4,0,1],[4,3,1,2,0]]}]}"#,
    );
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "minimize",
        "--gca",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("loop5"), "{err}");
    assert!(err.contains("associat"), "{err}");
}

#[test]
fn order_violating_homomorphism_is_diagnosed_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(
        &dir,
        "bad.json",
        r#"{"groups": [{"name": "z2", "kind": "cyclic", "n": 2},
                       {"name": "z4", "kind": "cyclic", "n": 4}],
            "homomorphisms": [{"name": "h", "domain": "z2",
                               "codomain": "z4", "images": [0, 1]}]}"#,
    );
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "minimize",
        "--gca",
        "x",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("'h'"));
}

#[test]
fn unknown_entity_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "apply",
        "--gca",
        "nope",
        "--input",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("nope"));
}

#[test]
fn missing_workspace_is_a_usage_error() {
    let out = run(&["minimize", "--gca", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexample_with_infinite_difference_set_is_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write_doc(&dir, "demo.json", DEMO);
    let out = run(&[
        "--workspace",
        doc.to_str().unwrap(),
        "counterexample",
        "--phi",
        "idz",
        "--psi",
        "dbl",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_writes_a_json_report_matching_stdout_facts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = Command::new(bin())
        .args(["verify", "--max-order", "3", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let checks = json["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for check in checks {
        assert_eq!(check["status"], "pass");
        assert!(text.contains(check["name"].as_str().unwrap()), "{text}");
    }
}

#[test]
fn verify_is_deterministic_across_runs() {
    let strip = |raw: &str| -> String {
        let mut v: serde_json::Value = serde_json::from_str(raw).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    let dir = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("r{i}.json"));
        let status = Command::new(bin())
            .args(["verify", "--max-order", "4", "--report"])
            .arg(&path)
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
        seen.push(strip(&std::fs::read_to_string(&path).unwrap()));
    }
    assert_eq!(seen[0], seen[1]);
}
