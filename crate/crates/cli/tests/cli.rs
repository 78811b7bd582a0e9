//! Command-line behavior: exit codes, report determinism, CSV handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chsh-forge"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("chsh-forge-test-{}-{name}", std::process::id()));
    p
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn detected_violations_are_findings_not_failures() {
    let out = run_ok(&[
        "run", "--model", "prbox", "--trials", "2000", "--seed", "7", "--no-timestamp",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], "chsh-report/1");
    assert_eq!(report["reorder"]["status"], "oi-mismatch");
    assert_eq!(report["correlations"]["chsh_filtered"], 4.0);
}

#[test]
fn setting_leakage_exits_two() {
    let out = bin()
        .args(["run", "--model", "leaky", "--trials", "4", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("setting-leakage"));
}

#[test]
fn unknown_model_exits_one_listing_names() {
    let out = bin()
        .args(["run", "--model", "teleporter", "--trials", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    for name in ["deterministic", "memory", "clocked", "singlet", "prbox", "signaling"] {
        assert!(stderr.contains(name), "stderr lacks {name}: {stderr}");
    }
}

#[test]
fn zero_trials_exits_one_with_invalid_parameter() {
    let out = bin()
        .args(["run", "--model", "prbox", "--trials", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid-parameter"));
}

#[test]
fn bad_flags_exit_one() {
    let out = bin().args(["run", "--nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_without_timestamps() {
    let a = run_ok(&[
        "run", "--model", "clocked", "--trials", "3000", "--seed", "11", "--no-timestamp",
    ]);
    let b = run_ok(&[
        "run", "--model", "clocked", "--trials", "3000", "--seed", "11", "--no-timestamp",
    ]);
    assert_eq!(a.stdout, b.stdout);

    // With timestamps the reports differ at most in the labeled field.
    let t = run_ok(&["run", "--model", "clocked", "--trials", "300", "--seed", "11"]);
    let v: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert!(v["timestamp_unix"].is_u64());
}

#[test]
fn run_prove_round_trip_reproduces_the_replay() {
    let table = tmp("roundtrip.csv");
    let run_out = run_ok(&[
        "run", "--model", "memory", "--trials", "4000", "--seed", "3",
        "--no-timestamp", "--table", table.to_str().unwrap(),
    ]);
    let run_report: serde_json::Value = serde_json::from_slice(&run_out.stdout).unwrap();

    let prove_out = run_ok(&[
        "prove", "--table", table.to_str().unwrap(), "--no-timestamp",
    ]);
    let prove_report: serde_json::Value = serde_json::from_slice(&prove_out.stdout).unwrap();

    assert_eq!(run_report["reorder"], prove_report["reorder"]);
    assert_eq!(run_report["joint"], prove_report["joint"]);
    std::fs::remove_file(&table).ok();
}

#[test]
fn joint_csv_is_written_on_success() {
    let joint = tmp("joint.csv");
    run_ok(&[
        "run", "--model", "deterministic", "--trials", "500", "--seed", "2",
        "--no-timestamp", "--joint", joint.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&joint).unwrap();
    assert!(text.starts_with("trial,A,B,Bp,Ap\n"));
    assert_eq!(text.lines().count(), 501);
    std::fs::remove_file(&joint).ok();
}

#[test]
fn header_typo_is_named_with_exit_one() {
    let path = tmp("typo.csv");
    std::fs::write(&path, "trial,A1,B1p,A2,Bp2,Ap3,B3,Ap4,Bp4,S\n0,1,1,1,1,1,1,1,1,1\n").unwrap();
    let out = bin()
        .args(["prove", "--table", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("B1p"), "stderr: {stderr}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn non_dichotomic_table_exits_one() {
    let path = tmp("bounded.csv");
    std::fs::write(
        &path,
        "trial,A1,B1,A2,Bp2,Ap3,B3,Ap4,Bp4,S\n0,0.5,1,1,1,1,1,1,1,1\n",
    )
    .unwrap();
    let out = bin()
        .args(["prove", "--table", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires-dichotomic"));
    std::fs::remove_file(&path).ok();
}

/// Two rows: a1 = [+1, −1] with (a2, bp2) = [(−1, +1), (+1, −1)] must be
/// fixed by the single pair swap, with the pair correlation untouched.
#[test]
fn prove_matches_the_hand_enumerated_swap() {
    let path = tmp("swap.csv");
    // After the step-1 swap the B'2 column reads [-1, +1], so B'4 is laid
    // out to match it exactly and A'3 = A'4 already.
    std::fs::write(
        &path,
        "trial,A1,B1,A2,Bp2,Ap3,B3,Ap4,Bp4,S\n\
         0,1,1,-1,1,1,1,1,-1,1\n\
         1,-1,1,1,-1,1,1,1,1,2\n",
    )
    .unwrap();
    let out = run_ok(&[
        "prove", "--table", path.to_str().unwrap(), "--tolerance", "0", "--no-timestamp",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["reorder"]["status"], "success");
    let first = &report["reorder"]["audits"][0];
    assert_eq!(first["step"], "PI_A1A2");
    assert_eq!(first["discrepancy"], 0);
    assert_eq!(first["permutation_applied"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(
        first["correlations_before"]["c_abp"],
        first["correlations_after"]["c_abp"]
    );
    assert_eq!(first["correlations_before"]["c_abp"], -1.0);
    std::fs::remove_file(&path).ok();
}

#[test]
fn sweep_requires_two_trial_counts() {
    let out = bin()
        .args(["sweep", "--model", "prbox", "--trials-list", "1000", "--seeds", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(">= 2 trial counts"));
}

#[test]
fn sweep_cells_are_ordered_and_thread_cap_is_validated() {
    let out = bin()
        .args([
            "sweep", "--model", "deterministic", "--strategy", "random",
            "--trials-list", "200,400", "--seeds", "3", "--no-timestamp",
        ])
        .env("CHSH_FORGE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cells = report["cells"].as_array().unwrap();
    let order: Vec<(u64, u64)> = cells
        .iter()
        .map(|c| (c["trials"].as_u64().unwrap(), c["seed"].as_u64().unwrap()))
        .collect();
    assert_eq!(order, vec![(200, 0), (200, 1), (200, 2), (400, 0), (400, 1), (400, 2)]);

    let bad = bin()
        .args(["sweep", "--model", "prbox", "--trials-list", "100,200", "--seeds", "1"])
        .env("CHSH_FORGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sweep_shows_local_models_inside_the_shrinking_bound() {
    let out = run_ok(&[
        "sweep", "--model", "deterministic", "--strategy", "random",
        "--trials-list", "100,1000,10000", "--seeds", "8", "--no-timestamp",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let summary = report["summary"].as_array().unwrap();
    assert_eq!(summary.len(), 3);
    let mut last_tolerance = f64::INFINITY;
    for s in summary {
        assert_eq!(s["within_bound"], 8, "summary {s}");
        assert_eq!(s["replay_successes"], 8, "summary {s}");
        let tol = s["chsh_tolerance"].as_f64().unwrap();
        assert!(tol < last_tolerance, "allowance must shrink with n");
        last_tolerance = tol;
    }
}

#[test]
fn sweep_shows_singlet_concentrating_at_the_quantum_value() {
    let out = run_ok(&[
        "sweep", "--model", "singlet", "--trials-list", "2000,8000",
        "--seeds", "4", "--no-timestamp",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let two_sqrt2 = 2.0 * std::f64::consts::SQRT_2;
    for s in report["summary"].as_array().unwrap() {
        let mean = s["mean_chsh_filtered"].as_f64().unwrap();
        assert!(
            (mean - two_sqrt2).abs() < 0.1,
            "mean {mean} far from {two_sqrt2}"
        );
        assert_eq!(s["replay_successes"], 0, "the replay must reject the singlet");
    }
}

#[test]
fn sweep_parallelism_does_not_change_results() {
    let run_with = |threads: &str| {
        bin()
            .args([
                "sweep", "--model", "memory", "--trials-list", "300,600",
                "--seeds", "4", "--no-timestamp",
            ])
            .env("CHSH_FORGE_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run_with("1");
    let four = run_with("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
