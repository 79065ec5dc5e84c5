//! End-to-end tests of the `fockgate` binary: flags, exit codes, stream
//! separation and output determinism.

use std::io::Write;
use std::process::{Command, Output};

fn fockgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockgate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn effop_nonlinear_sign_quarter() {
    let out = fockgate(&["effop", "--builtin", "s11", "--R", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0.500000000000"));
    assert!(text.contains("-0.500000000000"));
    assert!(text.contains("-0.625000000000"));
}

#[test]
fn effop_phase_gate_has_qubit_labels() {
    let out = fockgate(&["effop", "--builtin", "phase-gate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("VV, VH, HV, HH"));
    assert!(text.contains("-0.333333333333"));
}

#[test]
fn effop_empty_circuit_is_identity() {
    let mut file = tempfile::Builder::new().suffix(".lop").tempfile().unwrap();
    writeln!(file, "modes 2").unwrap();
    let out = fockgate(&[
        "effop",
        "--circuit",
        file.path().to_str().unwrap(),
        "--cutoff",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().skip(1).map(str::trim).collect();
    assert_eq!(lines.len(), 3);
    for (i, line) in lines.iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().skip(1).collect();
        for (j, entry) in entries.iter().enumerate() {
            let expected = if i == j {
                "1.000000000000+0.000000000000i"
            } else {
                "0.000000000000+0.000000000000i"
            };
            assert_eq!(*entry, expected, "row {i} col {j}");
        }
    }
}

#[test]
fn effop_circuit_file_with_faults_exits_2_with_diagnostics() {
    let mut file = tempfile::Builder::new().suffix(".lop").tempfile().unwrap();
    writeln!(file, "modes 2\nbs 0 5 R=2").unwrap();
    let out = fockgate(&["effop", "--circuit", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    let err = stderr(&out);
    assert!(err.contains("out of range"));
    assert!(err.contains("outside [0, 1]"));
}

#[test]
fn effop_requires_a_circuit() {
    let out = fockgate(&["effop"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--builtin"));
}

#[test]
fn effop_rejects_reflectivity_for_fixed_builtins() {
    let out = fockgate(&["effop", "--builtin", "pol-filter", "--R", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("does not take --R"));
}

#[test]
fn verify_passes_by_default() {
    let out = fockgate(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("9 of 9 checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_fails_at_impossible_tolerance() {
    let out = fockgate(&["verify", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_rejects_nonpositive_tolerance() {
    let out = fockgate(&["verify", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_perturbed_phase_gate_fails() {
    let out = fockgate(&["verify", "--R", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("phase-gate"));
    assert!(text.contains("FAIL"));
}

#[test]
fn verify_small_cutoff_is_a_capacity_error() {
    let out = fockgate(&["verify", "--cutoff", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("below the minimum"));
}

#[test]
fn effop_phase_gate_enforces_its_minimum_cutoff() {
    let out = fockgate(&["effop", "--builtin", "phase-gate", "--cutoff", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("phase-gate"));
}

#[test]
fn verify_csv_is_stable_across_runs() {
    let first = fockgate(&["verify", "--format", "csv"]);
    let second = fockgate(&["verify", "--format", "csv"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,max_abs_error,pass"));
    assert_eq!(lines.count(), 9);
}

#[test]
fn oracle_passes_and_is_deterministic() {
    let first = fockgate(&["oracle"]);
    let second = fockgate(&["oracle"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("pass"));
}

#[test]
fn oracle_seeded_runs_are_byte_identical() {
    let first = fockgate(&["oracle", "--seed", "123"]);
    let second = fockgate(&["oracle", "--seed", "123"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn oracle_cutoff_zero_trivially_passes() {
    let out = fockgate(&["oracle", "--cutoff", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn prob_filter_entangles_circular_input() {
    let out = fockgate(&["prob", "--builtin", "pol-filter", "--input", "R,L"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("success probability: 0.031250000000"));
    assert!(text.contains("0.707106781187"));
}

#[test]
fn prob_phase_gate_flips_hh() {
    let out = fockgate(&["prob", "--builtin", "phase-gate", "--input", "H,H"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("success probability: 0.111111111111"));
    assert!(text.contains("-1.000000000000"));
}

#[test]
fn prob_core_filter_blocks_single_photons() {
    let out = fockgate(&["prob", "--builtin", "core-filter", "--input", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("success probability: 0.000000000000"));
    assert!(text.contains("none"));
}

#[test]
fn prob_rejects_letters_on_non_qubit_circuits() {
    let out = fockgate(&["prob", "--builtin", "s11", "--input", "H"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn prob_uses_a_declared_input_line() {
    let mut file = tempfile::Builder::new().suffix(".lop").tempfile().unwrap();
    writeln!(
        file,
        "modes 2\nbs 0 1 R=1/2\nancilla 1 in=1 out=1\ninput 1"
    )
    .unwrap();
    let out = fockgate(&["prob", "--circuit", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("success probability: 0.000000000000"));
}

#[test]
fn unknown_builtin_is_a_usage_error() {
    let out = fockgate(&["effop", "--builtin", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown builtin"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = fockgate(&[]);
    assert_eq!(out.status.code(), Some(2));
}
