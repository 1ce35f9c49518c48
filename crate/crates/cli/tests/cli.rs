//! Behavioural tests for the `p3` binary: output schemas, determinism, and
//! the exit-code contract (0 pass, 2 runtime/config error, 3 identity
//! failure).

use std::path::PathBuf;
use std::process::{Command, Output};

fn p3() -> Command {
    Command::new(env!("CARGO_BIN_EXE_p3"))
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("p3-cli-test-{name}.json"));
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout_str(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn integrate_csv_schema_and_determinism() {
    let run = || p3().arg("integrate").output().unwrap();
    let a = run();
    assert!(a.status.success());
    let text = stdout_str(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im"
    );
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(first.len(), 8);
    assert_eq!(&first[..6], &[1.0, 0.0, 0.5, 0.0, 0.3, 0.4]);

    // byte-identical across repeated runs
    let b = run();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn integrate_single_row_when_t_end_equals_t0() {
    let cfg = write_config("single-row", r#"{"t_end": 1.0}"#);
    let out = p3().arg("integrate").arg("--config").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 2, "header plus exactly one row");
}

#[test]
fn integrate_pole_reports_machine_readable_error() {
    let cfg = write_config("pole", r#"{"q0": 2.0, "p0": 2.0}"#);
    let out = p3().arg("integrate").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["error"], "PoleEncountered");
}

#[test]
fn integrate_rejects_segment_through_origin() {
    let cfg = write_config("origin", r#"{"t0": -1.0, "t_end": 1.0}"#);
    let out = p3().arg("integrate").arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "SegmentThroughOrigin");
}

#[test]
fn integrate_csv_matches_rational_seed() {
    let cfg = write_config(
        "seed",
        r#"{"v1": 0.0, "v2": 1.0, "t0": 1.0, "q0": 1.0, "p0": 0.25, "t_end": 4.0}"#,
    );
    let out = p3().arg("integrate").arg("--config").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    for line in stdout_str(&out).lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let t = cols[0];
        assert!((cols[2] - t.sqrt()).abs() < 1e-9, "q vs sqrt(t) at t = {t}");
        assert!((cols[4] - 0.25 / t.sqrt()).abs() < 1e-9);
    }
}

#[test]
fn transform_emits_target_states() {
    let out = p3().arg("transform").arg("--corner").arg("W").output().unwrap();
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im");
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    // T = t/4 at t0 = 1
    assert!((first[0] - 0.25).abs() < 1e-14);
    // missing corner is a config error
    let out = p3().arg("transform").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_default_passes_with_exit_zero() {
    let out = p3().arg("verify").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 7);
    for r in reports {
        assert_eq!(r["pass"], true, "{} failed", r["identity"]);
        assert!(r["max_residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn verify_selection_subset() {
    let out = p3()
        .arg("verify")
        .arg("--identities")
        .arg("weyl,psum")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity"].as_str().unwrap())
        .collect();
    assert_eq!(names, vec!["weyl-group", "momentum-sum"]);
}

#[test]
fn verify_unknown_identity_is_config_error() {
    let out = p3().arg("verify").arg("--identities").arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_corruption_fails_with_exit_three() {
    for corrupt in ["qw", "ps"] {
        let out = p3().arg("verify").arg("--corrupt").arg(corrupt).output().unwrap();
        assert_eq!(out.status.code(), Some(3), "corruption {corrupt}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["pass"], false);
    }
}

#[test]
fn verify_respects_tol_flag() {
    // an absurdly tight tolerance turns rounding noise into failure
    let out = p3().arg("verify").arg("--tol").arg("1e-20").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_json_schema() {
    let out = p3().arg("classify").arg("0").arg("1").output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out).trim(),
        r#"{"v1":0.0,"v2":1.0,"class":"Rational","mixed_parity":false}"#
    );
    let out = p3().arg("classify").arg("0").arg("0").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "OneParameter");
    let out = p3().arg("classify").arg("1/2").arg("1/3").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "Generic");
    let out = p3().arg("classify").arg("x").arg("0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rational_json_roundtrip() {
    let out = p3().arg("rational").arg("1").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["residual_is_zero"], true);
    assert_eq!(v["solution"]["v1"], "1");
    assert_eq!(v["solution"]["v2"], "2");
    // documented schema round-trips through the library type
    let sol: painleve3::classical::RationalSolution =
        serde_json::from_value(v["solution"].clone()).unwrap();
    let (rq, rp) = painleve3::classical::eom_residual_exact(&sol);
    assert!(rq.is_zero() && rp.is_zero());
}

#[test]
fn bessel_tau_value_and_grid() {
    let out = p3().arg("bessel-tau").arg("--n").arg("0").arg("--t").arg("1").output().unwrap();
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t_re,t_im,tau_re,tau_im");
    let cols: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((cols[2] - 1.2660658777520084).abs() < 1e-12, "I_0(1)");

    let out = p3()
        .args(["bessel-tau", "--n", "1", "--t", "1", "--t-max", "3", "--points", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_str(&out).lines().count(), 6);

    let out = p3().args(["bessel-tau", "--kind", "zz"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join("p3-cli-test-out.csv");
    let _ = std::fs::remove_file(&path);
    let out = p3().arg("integrate").arg("--out").arg(&path).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t_re,t_im,"));
}
