use std::path::PathBuf;
use std::process::{Command, Output};

use oproot::ComplexMatrix;

fn oproot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oproot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oproot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cesaro_closed_root_has_the_expected_diagonal() {
    let path = scratch("a.csv");
    let out = oproot(&[
        "root",
        "cesaro-closed",
        "--n",
        "32",
        "--sign",
        "+1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a = ComplexMatrix::from_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((a.rows(), a.cols()), (32, 32));
    for i in 0..32 {
        assert!((a.get(i, i).re - 1.0 / ((i + 1) as f64).sqrt()).abs() < 1e-10);
    }
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["name"], "cesaro-closed");
    assert_eq!(sidecar["params"]["sign"], "+1");
    assert!(
        sidecar["constraint_residuals"]["square_residual"]
            .as_f64()
            .unwrap()
            < 1e-10
    );
}

#[test]
fn negative_sign_is_accepted() {
    let out = oproot(&["root", "cesaro-closed", "--n", "8", "--sign", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let a = ComplexMatrix::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!((a.get(3, 3).re + 0.5).abs() < 1e-12);
}

#[test]
fn cesaro_eigencheck_passes() {
    let out = oproot(&["verify", "cesaro-eigen", "--w", "0.5", "--n", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["pass"], true);
}

#[test]
fn failing_claim_exits_with_one() {
    let out = oproot(&["verify", "boundary-fig1", "--points", "2000"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["build", "nonsense"],
        &["root", "cesaro-closed", "--quad", "10"],
        &["verify", "cesaro-eigen", "--terms", "5"],
        &["verify", "no-such-claim"],
        &["figure", "fig3"],
        &["root", "cesaro-closed", "--sign", "2"],
        &["suite", "--only", "13"],
        &["figure", "fig1", "--radial", "4"],
    ] {
        assert_eq!(oproot(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn identical_invocations_write_identical_bytes() {
    let (a, b) = (scratch("fig-a.csv"), scratch("fig-b.csv"));
    for p in [&a, &b] {
        let out = oproot(&[
            "figure",
            "fig2",
            "--radial",
            "16",
            "--angular",
            "16",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes.len(), std::fs::read(&b).unwrap().len());
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(bytes).unwrap().lines().count(), 16 * 16);

    let r1 = oproot(&["root", "tcos", "--n", "16", "--quad", "1024"]).stdout;
    let r2 = oproot(&["root", "tcos", "--n", "16", "--quad", "1024"]).stdout;
    assert_eq!(r1, r2);
}

#[test]
fn build_dumps_operator_sections() {
    let out = oproot(&["build", "shift2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let s2 = ComplexMatrix::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(s2.get(2, 0).re, 1.0);
    assert_eq!(s2.get(1, 0).re, 0.0);
}

#[test]
fn suite_runs_a_single_criterion() {
    let out = oproot(&["suite", "--only", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion  4 [PASS]"), "{text}");
}
