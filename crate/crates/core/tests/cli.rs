use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qaffine");

fn qaffine(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn write_temp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("qaffine_{}_{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn example3_matches_golden_report() {
    let out = qaffine(&["example3"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("golden/example3.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let file = data("example3.json");
    for args in [
        vec!["analyze", file.as_str()],
        vec!["verify", file.as_str(), "--samples", "30", "--seed", "11"],
        vec!["hasse", file.as_str(), "--dot", "-"],
    ] {
        assert_eq!(qaffine(&args).stdout, qaffine(&args).stdout, "{args:?}");
    }
}

#[test]
fn analyze_and_limit_on_shipped_file() {
    let file = data("example3.json");
    let a = qaffine(&["analyze", &file]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["rank_vector"], serde_json::json!([0, 2, 0, 0, 1, 1, 1, 0]));

    let l = qaffine(&["limit", &file]);
    assert_eq!(l.status.code(), Some(0));
    assert_eq!(
        json(&l)["poisson_matrix"],
        serde_json::json!([["0", "2", "2*alpha"], ["-2", "0", "0"], ["-2*alpha", "0", "0"]])
    );
}

#[test]
fn verify_reports_every_sample() {
    let file = data("example3.json");
    let out = qaffine(&["verify", &file, "--max-degree", "3", "--samples", "200", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["passed"], 200);
    assert_eq!(v["samples"], 200);
}

#[test]
fn core_at_a_point() {
    let file = data("example3.json");
    let out = qaffine(&["core", &file, "--point", "0,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["poisson_core"], "<x1, x2 - 2, x3 - 3>");

    let bad = qaffine(&["core", &file, "--point", "1,2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn hasse_writes_dot_file() {
    let file = data("example3.json");
    let dot = std::env::temp_dir().join(format!("qaffine_{}.dot", std::process::id()));
    let out = qaffine(&["hasse", &file, "--dot", dot.to_str().unwrap(), "--granularity", "torus"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    let _ = std::fs::remove_file(&dot);
    assert!(text.starts_with("digraph"));
    // torus-invariant primes ordered by inclusion: every singleton sits above <0>
    for w in ["w_100", "w_010", "w_001"] {
        assert!(text.contains(&format!("w_000 -> {w}")), "{text}");
    }
}

#[test]
fn input_errors_exit_with_two() {
    let both = write_temp(
        "both.json",
        r#"{"n": 2, "m": 1, "L": [[[0, 1], [-1, 0]]], "r": [[0, 1], [-1, 0]]}"#,
    );
    let out = qaffine(&["analyze", &both]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mutually exclusive"));
    let _ = std::fs::remove_file(&both);

    let empty = write_temp("empty.json", "");
    let out = qaffine(&["analyze", &empty]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax"));
    let _ = std::fs::remove_file(&empty);

    let diag = write_temp("diag.json", r#"{"n": 2, "m": 1, "L": [[[1, 1], [-1, 0]]]}"#);
    let out = qaffine(&["analyze", &diag]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diagonal must vanish"));
    let _ = std::fs::remove_file(&diag);

    assert_eq!(qaffine(&["analyze", "/nonexistent/input.json"]).status.code(), Some(2));
    assert_eq!(qaffine(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn toric_subcommands() {
    let spec = write_temp(
        "toric.json",
        r#"{"n": 3, "m": 1, "L": [[[0, 1, 0], [-1, 0, 0], [0, 0, 0]]],
            "toric": {"d": 2, "degrees": [[1, 0, 1], [0, 1, 1]], "L": [[[0, 1], [-1, 0]]]}}"#,
    );
    let out = qaffine(&["toric", "pullback", &spec]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // l(a, b) = a_1 b_2 - a_2 b_1 on the columns (1,0), (0,1), (1,1)
    let v = json(&out);
    assert_eq!(v["pullback"][0], serde_json::json!([[0, 1, 1], [-1, 0, -1], [-1, 1, 0]]));

    let out = qaffine(&["toric", "check", &spec, "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let _ = std::fs::remove_file(&spec);
}
