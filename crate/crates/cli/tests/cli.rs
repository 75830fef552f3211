use std::process::{Command, Output};

use qsmc::fixtures::{fixture, fixture_names};
use qsmc::report::run_pipeline;

fn qsmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsmc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn validate_corrected_ex1() {
    let out = qsmc(&["validate", "ex1-corrected"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).ends_with("valid\n"));
}

#[test]
fn validate_flags_degenerate_phi() {
    let out = qsmc(&["validate", "flat-abelian", "--format", "machine"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn report_ex3_machine() {
    let out = qsmc(&["report", "ex3", "--format", "machine"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let d = &v["discrepancies"];
    assert_eq!(d["summary"]["mismatches"], 28);
    let ricci: Vec<_> = d["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["section"] == "ricci_qsmc_diag" && e["verdict"] == "mismatch")
        .map(|e| (e["claimed"].as_str().unwrap().to_string(), e["computed"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(ricci, vec![("-8".to_string(), "-14".to_string()); 4]);
}

#[test]
fn classify_ex2_ricci() {
    let out = qsmc(&["classify", "ex2", "--tensor", "ricci", "--connection", "qsmc"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next(), Some("proportional, L = -2"));
}

#[test]
fn classify_machine_and_lc() {
    let out = qsmc(&["classify", "ex2", "--tensor", "riemann", "--connection", "lc", "--format", "machine"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["full"]["kind"], "both_zero");
    assert_eq!(v["connection"], "levi_civita");
}

#[test]
fn report_exit_codes_follow_pipeline_status() {
    for name in fixture_names() {
        let expected = run_pipeline(&fixture(name).unwrap()).unwrap().exit_code();
        for format in ["human", "machine"] {
            let out = qsmc(&["report", name, "--format", format]);
            assert_eq!(code(&out), expected, "{name} {format}");
        }
    }
}

#[test]
fn machine_reports_are_byte_identical() {
    for name in fixture_names() {
        let a = qsmc(&["report", name, "--format", "machine"]);
        let b = qsmc(&["report", name, "--format", "machine"]);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn identities_exit_status() {
    let out = qsmc(&["identities", "ex1-printed"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("xi_derivative         FAIL  at (2)"), "{}", stdout(&out));
}

#[test]
fn fixtures_list() {
    let out = qsmc(&["fixtures", "list"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().collect::<Vec<_>>(), fixture_names().collect::<Vec<_>>());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&qsmc(&["report", "ex2", "--bogus"])), 2);
    assert_eq!(code(&qsmc(&["classify", "ex2", "--tensor", "weyl", "--connection", "lc"])), 2);
    assert_eq!(code(&qsmc(&[])), 2);
    let out = qsmc(&["report", "no-such-fixture"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no such file or built-in fixture"));
}

#[test]
fn malformed_spec_file_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name": "bad", "dimension": 2, "brackets": [[1, 1, 1, "1"]], "phi": [], "xi": ["0", "1"]}"#,
    )
    .unwrap();
    let out = qsmc(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("brackets[0]: bracket requires i<j"), "{}", stderr(&out));
}

#[test]
fn spec_file_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("abelian.json");
    std::fs::write(&path, r#"{"name": "abelian", "dimension": 2, "brackets": [], "phi": [], "xi": ["0", "1"]}"#)
        .unwrap();
    let out = qsmc(&["classify", path.to_str().unwrap(), "--tensor", "ricci", "--connection", "qsmc"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "both_zero\nxi-slice: both_zero\n");
}

#[test]
fn jacobi_violation_aborts_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jacobi.json");
    // [E1,E2] = E3, [E2,E3] = E2, [E1,E3] = 0 violates Jacobi.
    std::fs::write(
        &path,
        r#"{"name": "jacobi", "dimension": 3, "brackets": [[1, 2, 3, "1"], [2, 3, 2, "1"]], "phi": [], "xi": ["0", "0", "1"]}"#,
    )
    .unwrap();
    let out = qsmc(&["report", path.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "invalid_presentation");
}
