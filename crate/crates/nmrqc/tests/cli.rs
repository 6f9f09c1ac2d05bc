//! Black-box tests of the command-line binary: exit codes, deterministic
//! output, and the no-partial-output guarantee.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nmrqc");

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nmrqc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn simulate_reports_the_answer() {
    let out = run(&[
        "simulate",
        "--molecule",
        &data("chloroform.toml"),
        "--circuit",
        &data("cnot.circ"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("qubit 0: 1"), "{text}");
    assert!(text.contains("qubit 1: 1"), "{text}");
}

#[test]
fn simulate_output_is_deterministic() {
    let dir = scratch("determinism");
    let args = [
        "simulate",
        "--molecule",
        &data("homonuclear_pair.toml"),
        "--circuit",
        &data("bell.circ"),
        "--prep",
        "thermal",
        "--out-dir",
        dir.to_str().unwrap(),
    ];
    let first = run(&args);
    assert!(first.status.success());
    let report_a = std::fs::read(dir.join("report.txt")).unwrap();
    let seq_a = std::fs::read(dir.join("sequence.pseq")).unwrap();
    let second = run(&args);
    let report_b = std::fs::read(dir.join("report.txt")).unwrap();
    let seq_b = std::fs::read(dir.join("sequence.pseq")).unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(report_a, report_b);
    assert_eq!(seq_a, seq_b);
}

#[test]
fn parse_errors_exit_2_and_leave_no_output() {
    let dir = scratch("parse-error");
    let bad = std::env::temp_dir().join(format!("nmrqc-bad-{}.circ", std::process::id()));
    std::fs::write(&bad, "CNOT 0 1\nFROB 1\n").unwrap();
    let out = run(&[
        "simulate",
        "--molecule",
        &data("chloroform.toml"),
        "--circuit",
        bad.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(out.stdout.is_empty());
    assert!(!dir.exists(), "failed run must not leave partial files");
}

#[test]
fn compile_errors_exit_3() {
    let mol = std::env::temp_dir().join(format!("nmrqc-uncoupled-{}.toml", std::process::id()));
    std::fs::write(
        &mol,
        "field_tesla = 11.74\n\n[[spins]]\nspecies = \"H1\"\noffset_hz = 100.0\n\n\
         [[spins]]\nspecies = \"C13\"\noffset_hz = -50.0\n",
    )
    .unwrap();
    let circ = std::env::temp_dir().join(format!("nmrqc-cnot-{}.circ", std::process::id()));
    std::fs::write(&circ, "CNOT 0 1\n").unwrap();
    let out = run(&[
        "compile",
        "--molecule",
        mol.to_str().unwrap(),
        "--circuit",
        circ.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn physics_errors_exit_4() {
    let out = run(&[
        "simulate",
        "--molecule",
        &data("chloroform.toml"),
        "--circuit",
        &data("cnot.circ"),
        "--temperature=-5",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_files_exit_5() {
    let out = run(&[
        "simulate",
        "--molecule",
        "/nonexistent/molecule.toml",
        "--circuit",
        &data("cnot.circ"),
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn spectrum_writes_fid_spectrum_and_peaks() {
    let dir = scratch("spectrum");
    let out = run(&[
        "spectrum",
        "--molecule",
        &data("chloroform.toml"),
        "--prep",
        "thermal",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["fid.csv", "spectrum.csv", "peaks.txt"] {
        assert!(dir.join(name).exists(), "{name} missing");
    }
    let fid = std::fs::read_to_string(dir.join("fid.csv")).unwrap();
    assert!(fid.starts_with("time_s,real,imag"));
    assert_eq!(fid.lines().count(), 4097);
    // The 1H doublet sits at offset +/- J/2.
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("92.5"), "{text}");
    assert!(text.contains("307.5"), "{text}");
}

#[test]
fn compile_emits_a_parseable_sequence() {
    let seq_path = std::env::temp_dir().join(format!("nmrqc-seq-{}.pseq", std::process::id()));
    let out = run(&[
        "compile",
        "--molecule",
        &data("three_spin_chain.toml"),
        "--circuit",
        &data("bell.circ"),
        "--out",
        seq_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&seq_path).unwrap();
    nmrqc::io::parse_sequence(&text).unwrap();
}

#[test]
fn analyze_reports_feasibility_numbers() {
    let out = run(&["analyze", "--molecule", &data("homonuclear_pair.toml")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("qubit limit: 6 per species x 5 species = 30"), "{text}");
    assert!(text.contains("= 1000 gates"), "{text}");
    assert!(text.contains("selectivity"), "{text}");
}

#[test]
fn demo_runs_and_unknown_demo_exits_2() {
    let out = run(&["demo", "deutsch", "--prep", "pure"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("verdict: constant").count(), 2);
    assert_eq!(text.matches("verdict: balanced").count(), 2);

    let out = run(&["demo", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}
