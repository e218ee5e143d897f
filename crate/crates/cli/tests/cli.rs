use std::process::{Command, Output};

use hk_cli::report::{read_document, RigidityDoc, RigidityRun};

fn hkrigid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkrigid")).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(hkrigid(&["rigidity", "--n", "3"]).status.code(), Some(1));
    assert_eq!(hkrigid(&["rigidity", "--n", "5", "--orbits"]).status.code(), Some(0));
    assert_eq!(hkrigid(&["rigidity", "--n", "2"]).status.code(), Some(3));
    assert_eq!(hkrigid(&["rigidity", "--n", "5", "--n-range", "4..6"]).status.code(), Some(3));
    assert_eq!(hkrigid(&["rigidity", "--orbits", "--full"]).status.code(), Some(3));
    assert_eq!(hkrigid(&["nonsense"]).status.code(), Some(3));
    assert_eq!(hkrigid(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_registry_is_a_usage_error() {
    let out = hkrigid(&["rigidity", "--n", "5", "--registry", "/nonexistent/registry.jsonl"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read registry"));
}

#[test]
fn empty_registry_leaves_problems_unresolved() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    std::fs::write(&path, "").unwrap();
    let out = hkrigid(&["rigidity", "--n", "5", "--registry", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc: RigidityDoc = read_document(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!doc.unresolved_keys.is_empty());
    assert_eq!(doc.registry_digest, "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

    let retry = hkrigid(&["rigidity", "--n", "5", "--retry-undropped", "--registry", path.to_str().unwrap()]);
    assert_eq!(retry.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical() {
    let a = hkrigid(&["rigidity", "--n-range", "4..7"]);
    let b = hkrigid(&["rigidity", "--n-range", "4..7", "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let run: RigidityRun = read_document(&String::from_utf8(a.stdout).unwrap()).unwrap();
    assert_eq!(run.reports.iter().map(|r| r.n).collect::<Vec<_>>(), [4, 5, 6, 7]);
}

#[test]
fn timing_is_opt_in() {
    let out = hkrigid(&["rigidity", "--n", "4", "--timing"]);
    let doc: RigidityDoc = read_document(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(doc.timing.is_some_and(|t| t.seconds >= 0.0));
}

#[test]
fn files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let svg = dir.path().join("c.svg");
    let out = hkrigid(&["rigidity", "--n", "6", "--json", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("n=6 verdict=rigid"));
    let doc: RigidityDoc = read_document(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows as u64, doc.totals.problems);

    assert_eq!(hkrigid(&["cb", "--n", "2", "--emit-svg", svg.to_str().unwrap()]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn registry_regeneration_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("regen.jsonl");
    assert_eq!(hkrigid(&["registry", "--out", path.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(hkrigid(&["registry", "--check", "--registry", path.to_str().unwrap()]).status.code(), Some(0));
    std::fs::write(&path, "").unwrap();
    assert_eq!(hkrigid(&["registry", "--check", "--registry", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn checks_fail_under_an_injected_fault() {
    assert_eq!(hkrigid(&["checks", "--n-range", "5..5"]).status.code(), Some(0));
    assert_eq!(hkrigid(&["checks", "--n-range", "5..5", "--inject-fault", "0,0"]).status.code(), Some(1));
    assert_eq!(hkrigid(&["checks", "--inject-fault", "10,0"]).status.code(), Some(3));
}
