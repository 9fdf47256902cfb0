use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_torsion-burst"));
    c.env_remove("TORSION_WORKERS");
    c
}

#[test]
fn constants_print_json() {
    let out = bin().arg("constants").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let phases = v["solved"]["expected_phases"].as_f64().unwrap();
    assert!((phases - 2.495).abs() < 1e-2);
}

#[test]
fn errors_are_machine_readable() {
    let out = bin().args(["qtree-enumerate", "--n", "7"]).output().unwrap();
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "resource-guard");
    let out = bin().args(["lt-burst", "--n", "10", "--q0", "9"]).output().unwrap();
    assert!(!out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"], "invalid-argument");
}

#[test]
fn kalai_and_enumeration() {
    let out = bin().args(["kalai-check", "--n", "5"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["expected"], "125");
    let out = bin().args(["qtree-enumerate", "--n", "5"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 125);
}

#[test]
fn batch_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("r.jsonl");
    let out = bin()
        .args(["lt-burst", "--n", "16", "--trials", "3", "--window", "60", "--workers", "2", "--out"])
        .arg(&records)
        .output()
        .unwrap();
    assert!(out.status.success());
    let live: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(live["nontrivial"], 3);
    let tables = dir.path().join("tables");
    let out = bin()
        .arg("summarize")
        .arg(&records)
        .arg("--tables")
        .arg(&tables)
        .output()
        .unwrap();
    assert!(out.status.success());
    let again: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(live, again);
    assert!(tables.join("statistics.csv").exists());
}
