use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn twep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twep"))
        .args(args)
        .env_remove("TWEP_WORKERS")
        .output()
        .expect("could not run twep")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("non-utf8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is json")
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    std::fs::read_to_string(path).expect("fixture exists")
}

#[test]
fn golden_hamming_transcripts() {
    for (error, file) in [
        ("IIYIIII", "hamming-m3-Y3.jsonl"),
        ("IIIIXII", "hamming-m3-X5.jsonl"),
    ] {
        let out = twep(&["simulate", "hamming-m3", "--error", error]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), fixture(file), "transcript for {error}");
    }
    let via_m = twep(&["simulate", "hamming", "--m", "3", "--error", "IIYIIII"]);
    assert_eq!(stdout(&via_m), fixture("hamming-m3-Y3.jsonl"));
}

#[test]
fn verify_reports() {
    let out = twep(&["verify", "six-pair"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["errors_checked"], 19);
    assert_eq!(v["k_min"], 2);
    assert_eq!(v["pass"], true);
    assert_eq!(v["counterexamples"], Value::Array(vec![]));

    let out = twep(&["verify", "nine-pair", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["errors_checked"].clone(), v["k_min"].clone()),
        (352.into(), 1.into())
    );

    let out = twep(&["verify", "qutrit-four"]);
    assert_eq!(json(&out)["errors_checked"], 33);
}

#[test]
fn unknown_protocol_is_a_usage_error() {
    let out = twep(&["verify", "no-such"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["six-pair", "hamming-m3", "nine-pair", "qutrit-four"] {
        assert!(err.contains(key), "{err}");
    }
    assert!(out.stdout.is_empty());
}

#[test]
fn simulate_rejects_bad_errors() {
    for args in [
        ["simulate", "six-pair", "--error", "XXIIII"],
        ["simulate", "six-pair", "--error", "XQIIII"],
        ["simulate", "six-pair", "--error", "XIII"],
        ["simulate", "hamming-m3", "--error", "IIYIIII,"],
    ] {
        assert_eq!(twep(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn simulate_no_error_branch() {
    let out = twep(&["simulate", "six-pair", "--error", "IIIIII"]);
    assert!(out.status.success());
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["op"], "XXXXII");
    assert!(lines[..lines.len() - 1].iter().all(|l| l["outcome"] == 0));
    assert_eq!(lines.last().unwrap()["correction"], "IIIIII");
    assert_eq!(lines.last().unwrap()["k_out"], 2);
}

#[test]
fn two_party_view_is_consistent() {
    let out = twep(&[
        "simulate",
        "hamming-m3",
        "--error",
        "IIYIIII",
        "--two-party",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (transcript, view): (Vec<&str>, Vec<&str>) =
        text.lines().partition(|l| !l.contains("alice"));
    let outcomes: Vec<u64> = transcript
        .iter()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter_map(|v| v["outcome"].as_u64())
        .collect();
    assert_eq!(view.len(), outcomes.len());
    for (line, e) in view.iter().zip(outcomes) {
        let v: Value = serde_json::from_str(line).unwrap();
        let (a, b, s) = (
            v["alice"].as_u64().unwrap(),
            v["bob"].as_u64().unwrap(),
            v["y_parity"].as_u64().unwrap(),
        );
        assert_eq!(a ^ b, s ^ e);
    }
    assert_eq!(
        twep(&[
            "simulate",
            "qutrit-four",
            "--error",
            "X,I,I,I",
            "--two-party"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn greedy_command() {
    let out = twep(&["greedy", "--n", "6", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["max_steps"].as_u64().unwrap() <= 7);
    assert_eq!(v["step_bound"], 7);

    let out = twep(&["greedy", "--n", "30", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size limit"));
}

#[test]
fn cap_is_enforced() {
    let out = twep(&["verify", "nine-pair", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tables() {
    let out = twep(&["bounds", "--n", "9..10", "--t", "2", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "n,t,hamming_k,singleton_k,gv_k,thm2_k\n9,2,0,1,-5,-2\n10,2,1,2,-5,-1\n"
    );
    let v = json(&twep(&["bounds", "--n", "10", "--t", "1..2"]));
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["hamming_k"], 1);

    for bad in ["10..9", "a..3", ""] {
        assert_eq!(
            twep(&["bounds", "--n", bad, "--t", "1"]).status.code(),
            Some(2)
        );
    }

    let text = stdout(&twep(&["mi", "--count", "10", "--format", "csv"]));
    let terms: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(
        terms,
        ["1", "2", "4", "7", "12", "21", "37", "67", "124", "234"]
    );

    let out = twep(&["rates", "--points", "51", "--format", "csv"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 52);
    assert_eq!(text.lines().nth(1).unwrap(), "0.0,1.0,1.0");
    assert_eq!(twep(&["rates", "--points", "1"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "nine-pair"][..],
        &["greedy", "--n", "5", "--t", "1"][..],
        &[
            "simulate",
            "hamming-m4",
            "--error",
            "IIIIIIIIIIIIYII",
            "--two-party",
        ][..],
    ] {
        let a = twep(args);
        let b = twep(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
