use std::process::Command;

fn prover() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prover"))
}

#[test]
fn check_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = prover()
        .args(["check", "lower-bound-38", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS             lower-bound-38"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json[0]["name"], "lower-bound-38");
    assert_eq!(json[0]["verdict"], "PASS");
}

#[test]
fn failures_and_errors_set_the_exit_code() {
    let out = prover().args(["check", "reversible-15", "--prefix-len", "60"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = prover().args(["check", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check"));
}

#[test]
fn scripts_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(
        &path,
        "# parity\ndef even \"Ey x=2*y\"\neval all \"Ax $even(x) | $even(x+1)\"\neval none \"Ax $even(x)\"\n",
    )
    .unwrap();
    let out = prover().arg("script").arg(&path).args(["--system", "dt_h"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("eval all: TRUE"), "{text}");
    assert!(text.contains("eval none: FALSE"), "{text}");
    // a FALSE assertion is a failure
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_and_levels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dfao.txt");
    let out = prover().args(["export", "dfao"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("tracks 1\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("output")).count(), 4);

    let csv = dir.path().join("levels.csv");
    let out = prover()
        .args(["levels", "--n-max", "60", "--csv"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,count,bound_16n,ok"));
    assert_eq!(lines.next(), Some("58,864,928,true"));
}
