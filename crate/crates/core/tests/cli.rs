use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn slgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slgen"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_matrix(name: &str, field: &str, rows: &[&[i64]]) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("slgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let entries: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    let text = serde_json::json!({ "field": field, "n": rows.len(), "entries": entries });
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, text.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn partner_certifies_regular_nilpotent() {
    let x = write_matrix("jordan3", "q", &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let out = slgen(&["partner", s(&x)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["closure_dim"], 8);
    assert_eq!(v["verified"], true);
    assert_eq!(v["y_nilpotent"], true);
}

#[test]
fn partner_output_is_reproducible() {
    let x = write_matrix(
        "mixed4",
        "q",
        &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]],
    );
    let a = slgen(&["--seed", "9", "partner", s(&x)]);
    let b = slgen(&["--seed", "9", "partner", s(&x)]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn partner_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_slgen"))
        .args(["--format", "text", "partner", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"field":"q","n":2,"entries":[["0","1"],["0","0"]]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verified: true"));
}

#[test]
fn partner_over_prime_field_warns() {
    let x = write_matrix(
        "jordan3_fp",
        "fp:10007",
        &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]],
    );
    let out = slgen(&["partner", s(&x)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn precondition_failures_exit_3() {
    let zero = write_matrix("zero", "q", &[&[0, 0], &[0, 0]]);
    let diag = write_matrix("diag", "q", &[&[1, 0], &[0, -1]]);
    for p in [&zero, &diag] {
        let out = slgen(&["partner", s(p)]);
        assert_eq!(out.status.code(), Some(3));
        assert!(!out.stderr.is_empty());
    }
    let x = write_matrix("f2_jordan", "fp:2", &[&[0, 1], &[0, 0]]);
    assert_eq!(slgen(&["partner", s(&x)]).status.code(), Some(3));
    let q = write_matrix("q_for_mismatch", "q", &[&[0, 1], &[0, 0]]);
    assert_eq!(
        slgen(&["--field", "fp:7", "partner", s(&q)]).status.code(),
        Some(3)
    );
}

#[test]
fn parse_failures_exit_2() {
    let dir = std::env::temp_dir().join(format!("slgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(
        slgen(&["partner", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        slgen(&["partner", "/nonexistent/x.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        slgen(&["--field", "fp:9", "f2check"]).status.code(),
        Some(2)
    );
    assert_eq!(slgen(&["--budget", "0", "f2check"]).status.code(), Some(2));
}

#[test]
fn verify_reports_closure_dimension() {
    let e12 = write_matrix("e12", "q", &[&[0, 1], &[0, 0]]);
    let e21 = write_matrix("e21", "q", &[&[0, 0], &[1, 0]]);
    let v = json(&slgen(&["verify", s(&e12), s(&e21)]));
    assert_eq!(v["closure_dim"], 3);
    assert_eq!(v["generates"], true);
    let v = json(&slgen(&["verify", s(&e12), s(&e12)]));
    assert_eq!(v["closure_dim"], 1);
    assert_eq!(v["generates"], false);
}

#[test]
fn verify_shift_and_corner_at_even_size() {
    let m = write_matrix(
        "shift4",
        "q",
        &[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]],
    );
    let nn = write_matrix(
        "corner4",
        "q",
        &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0]],
    );
    let out = slgen(&["--audit", "verify", s(&m), s(&nn)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["generates"], false);
    assert_eq!(v["closure_dim"], 10);
    assert_eq!(v["audit"]["bracket_closed"], true);
}

#[test]
fn closure_and_split_commands() {
    let e12 = write_matrix("c_e12", "q", &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
    let e23 = write_matrix("c_e23", "q", &[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
    let v = json(&slgen(&["--audit", "closure", s(&e12), s(&e23)]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["audit"]["bracket_closed"], true);

    let c = write_matrix("split", "q", &[&[1, 0], &[0, -1]]);
    let v = json(&slgen(&["split", s(&c)]));
    assert_eq!(
        v["a"]["entries"],
        serde_json::json!([["1/2", "1/2"], ["-1/2", "-1/2"]])
    );
    assert_eq!(
        v["b"]["entries"],
        serde_json::json!([["1/2", "-1/2"], ["1/2", "-1/2"]])
    );
}

#[test]
fn consistent_set_command() {
    let v = json(&slgen(&["consistent", "--n", "4"]));
    assert_eq!(v["consistent"], true);
    assert_eq!(v["values"], serde_json::json!(["1", "2", "4", "-7"]));
}

#[test]
fn gallery_commands() {
    for args in [
        &["examples", "example1", "--n", "3"][..],
        &["examples", "example2", "--n", "5"],
        &["examples", "example2", "--n", "4"],
        &["examples", "lambda", "--n", "4"],
        &["examples", "lambda12"],
    ] {
        let out = slgen(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let out = slgen(&["--format", "text", "f2check"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(
        String::from_utf8_lossy(&out.stdout).contains("no nilpotent partner for E_12 in sl_3(F_2)")
    );
}

#[test]
fn example1_rejects_bad_scalings() {
    let out = slgen(&["examples", "example1", "--alphas", "1,2,3"]);
    assert_eq!(out.status.code(), Some(3));
}
