//! End-to-end command tests: closed-form values through the binary, exit
//! codes, canonical JSON round-trips, and the exact CSV shape.

use std::process::{Command, Output};

use sgnpoles_cli::envelope::{OutputEnvelope, Payload};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgnpoles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn solve_k0_closed_form() {
    let out = run(&["solve", "--k", "0", "--m", "1", "--a", "0.333333333333"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("L          = 5.0000000000037"), "got: {text}");
    assert!(text.contains("x^1"), "laurent block expected: {text}");
}

#[test]
fn solve_k1_m1_json() {
    let out = run(&[
        "solve", "--k", "1", "--m", "1", "--a", "0.25", "--format", "json",
    ]);
    assert!(out.status.success());
    let envelope: OutputEnvelope = serde_json::from_str(&stdout(&out)).expect("valid envelope");
    assert_eq!(envelope.command, "solve");
    let Payload::Solution(payload) = &envelope.payload else {
        panic!("solve must carry a solution payload");
    };
    let l = payload.solution.l.to_f64();
    assert!((l - 1.0 / 9.0).abs() < 1e-11, "L = {l}");
    assert_eq!(payload.alternation_x.len(), 3);
    assert!(payload.laurent.is_some());
    assert_eq!(
        envelope.params.get("prec_bits").unwrap().as_u64().unwrap(),
        97
    );
}

#[test]
fn solve_unweighted_closed_form() {
    let out = run(&[
        "solve",
        "--unweighted",
        "--p",
        "1",
        "--n",
        "2",
        "--a",
        "0.5",
    ]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("≈ 2.0833333333333"),
        "got: {}",
        stdout(&out)
    );
}

#[test]
fn json_envelope_round_trips_byte_identical() {
    for args in [
        vec![
            "solve", "--k", "1", "--m", "2", "--a", "0.5", "--format", "json",
        ],
        vec![
            "sweep", "--k", "0", "--a", "0.5", "--m-from", "2", "--m-to", "4", "--format", "json",
        ],
        vec![
            "asympt",
            "--formula",
            "eq01",
            "--k",
            "1",
            "--a",
            "0.5",
            "--format",
            "json",
        ],
        vec!["verify", "--suite", "equioscillation", "--format", "json"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "args: {args:?}");
        let text = stdout(&out);
        let envelope: OutputEnvelope = serde_json::from_str(&text).expect("valid envelope");
        let rendered = envelope.to_json();
        assert_eq!(text.trim_end(), rendered, "round-trip differs for {args:?}");
    }
}

#[test]
fn sweep_csv_header_is_bit_exact() {
    let out = run(&[
        "sweep", "--k", "0", "--a", "0.5", "--m-from", "2", "--m-to", "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,L,normalized,predicted,ratio,B,B_predicted,B_diff"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn sweep_supports_unweighted_mode() {
    let out = run(&[
        "sweep",
        "--k",
        "0",
        "--unweighted",
        "--a",
        "0.5",
        "--m-from",
        "2",
        "--m-to",
        "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().count() == 3);
}

#[test]
fn asympt_values_match_library() {
    let out = run(&[
        "asympt",
        "--formula",
        "model-b-q",
        "--q",
        "1",
        "--m",
        "2",
        "--a",
        "0.25",
    ]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("4.3944491546724391"),
        "got {}",
        stdout(&out)
    );

    let out = run(&["asympt", "--formula", "yk", "--k", "1"]);
    assert!(
        stdout(&out).contains("-2.3052328943245"),
        "got {}",
        stdout(&out)
    );
}

#[test]
fn verify_suite_exit_codes() {
    // Passing suite → 0.
    let out = run(&["verify", "--suite", "diagonal", "--m", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));

    // Unachievable tolerance → failing checks → exit 1. (k=1 instances
    // put alternation points off-grid, so the discretization gap is real.)
    let out = run(&[
        "verify", "--suite", "oracle", "--k", "1", "--m", "2", "--tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    // Unknown flag (clap) and domain errors both use the usage code.
    assert_eq!(run(&["solve", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--k", "1", "--a", "0.5", "--m-from", "9", "--m-to", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["asympt", "--formula", "nope", "--k", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", "--k", "0", "--m", "1", "--a", "1.7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_3() {
    // Precision floor: 64 bits cannot level a residual near 1e-22.
    let out = run(&[
        "solve",
        "--k",
        "0",
        "--m",
        "40",
        "--a",
        "0.5",
        "--prec-bits",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn precision_env_override_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_sgnpoles"))
        .args([
            "solve", "--k", "0", "--m", "1", "--a", "0.5", "--format", "json",
        ])
        .env("APPROX_PREC_BITS", "320")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let envelope: OutputEnvelope = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        envelope.params.get("prec_bits").unwrap().as_u64().unwrap(),
        320
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("sgnpoles-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let path_str = path.to_str().unwrap();
    let out = run(&[
        "sweep", "--k", "0", "--a", "0.5", "--m-from", "2", "--m-to", "3", "--out", path_str,
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("m,L,normalized,"));
    std::fs::remove_file(&path).ok();
}
