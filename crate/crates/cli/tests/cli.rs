//! End-to-end checks of the command-line binary: exit codes, JSON/CSV
//! artifact shapes, and byte-identical determinism under a fixed seed.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weyl-certify"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weyl-certify-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn write_unit_square(dir: &Path) -> PathBuf {
    let p = dir.join("unit-square.json");
    std::fs::write(
        &p,
        r#"{"n": 2, "boxes": [{"origin": [0, 0], "sides": [1, 1]}], "removed": []}"#,
    )
    .expect("domain file");
    p
}

fn run_ok(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn constants_json_shape() {
    let out = bin().args(["constants", "--n", "3"]).output().unwrap();
    let v = run_ok(&out);
    let omega = v["omega"].as_f64().unwrap();
    assert!((omega - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    assert!(v["c1"].as_f64().unwrap() > 0.0);
    assert!(v["c2"].as_f64().unwrap() > 0.0);
    assert!(v["c3_half_n"].as_f64().unwrap() > 0.0);
}

#[test]
fn count_and_spectrum_agree() {
    let dir = scratch("spec");
    let domain = write_unit_square(&dir);
    let out = bin()
        .args(["count", "--domain"])
        .arg(&domain)
        .args(["--lambda", "50"])
        .output()
        .unwrap();
    let v = run_ok(&out);
    // Eigenvalues π²(p² + q²) below 50: 2π², 5π² (twice).
    assert_eq!(v["count"].as_u64(), Some(3));

    let out = bin()
        .args(["spectrum", "--domain"])
        .arg(&domain)
        .args(["--lambda-max", "50"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,eigenvalue"));
    let first = lines.next().expect("one eigenvalue row");
    let (idx, val) = first.split_once(',').unwrap();
    assert_eq!(idx, "1");
    let lam1: f64 = val.parse().unwrap();
    assert!((lam1 - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-9);
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn bounds_value_shape() {
    let out = bin()
        .args([
            "bounds", "--family", "bly", "--volume", "1", "--n", "2", "--lambda", "100",
        ])
        .output()
        .unwrap();
    let v = run_ok(&out);
    assert_eq!(v["direction"].as_str(), Some("upper"));
    assert!(v["value"].as_f64().unwrap() > 0.0);
    assert!(v["tag"].as_str().unwrap().contains("upper"));
}

#[test]
fn certify_exit_codes_and_artifact() {
    let dir = scratch("certify");
    let domain = write_unit_square(&dir);
    let cert_path = dir.join("cert.json");

    let out = bin()
        .args(["certify", "--domain"])
        .arg(&domain)
        .args(["--epsilon", "0.9", "--json"])
        .arg(&cert_path)
        .output()
        .unwrap();
    let v = run_ok(&out);
    assert_eq!(v["verdict"]["outcome"].as_str(), Some("certified"));
    let on_disk: Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(on_disk["verdict"]["outcome"].as_str(), Some("certified"));

    // A λ-cap below the threshold yields a partial certificate: exit 2.
    let out = bin()
        .args(["certify", "--domain"])
        .arg(&domain)
        .args(["--epsilon", "0.9", "--lambda-cap", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Unreadable input: exit 2.
    let out = bin()
        .args(["certify", "--domain", "/nonexistent/x.json", "--epsilon", "0.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic_and_sound() {
    let dir = scratch("sweep");
    let domain = write_unit_square(&dir);
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for p in [&a, &b] {
        let out = bin()
            .args(["sweep", "--domain"])
            .arg(&domain)
            .args(["--lambda-max", "500", "--points", "40", "--seed", "7", "--csv"])
            .arg(p)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ba.is_empty());
    assert_eq!(ba, bb, "same config + seed must give byte-identical artifacts");
    let text = String::from_utf8(ba).unwrap();
    assert!(text.lines().next().unwrap().starts_with("lambda,count_exact,weyl_main,r_omega"));
    assert_eq!(text.lines().count(), 41);
}

#[test]
fn whitney_check_passes_on_l_shape() {
    let dir = scratch("whitney");
    let p = dir.join("l-shape.json");
    std::fs::write(
        &p,
        r#"{"n": 2, "boxes": [
            {"origin": [0, 0], "sides": [2, 1]},
            {"origin": [0, 1], "sides": [1, 1]}
        ], "removed": []}"#,
    )
    .unwrap();
    let out = bin()
        .args(["whitney", "--domain"])
        .arg(&p)
        .args(["--depth", "6", "--check"])
        .output()
        .unwrap();
    let v = run_ok(&out);
    assert_eq!(v["check"]["ok"].as_bool(), Some(true));
}

#[test]
fn lambda_eps_reports_threshold() {
    let dir = scratch("lambda-eps");
    let domain = write_unit_square(&dir);
    let out = bin()
        .args(["lambda-eps", "--domain"])
        .arg(&domain)
        .args(["--epsilon", "0.5", "--convex"])
        .output()
        .unwrap();
    let v = run_ok(&out);
    let lam = v["lambda_epsilon"].as_f64().unwrap();
    assert!(lam > 1.0, "threshold should sit above width⁻² = 1");
    assert!(v["residual"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn admissible_builtin_family_certifies() {
    let out = bin()
        .args([
            "admissible",
            "--builtin-n",
            "2",
            "--builtin-depth",
            "12",
            "--check",
            "rectangle-removal",
            "--base-volume",
            "61",
        ])
        .output()
        .unwrap();
    let v = run_ok(&out);
    assert_eq!(v["verdict"]["outcome"].as_str(), Some("certified"));
    assert!(v["numbers"]["margin"].as_f64().unwrap() > 0.0);
}

/// A downstream reader closing the pipe must end the process quietly (the
/// conventional SIGPIPE death), not with a broken-pipe panic and backtrace.
#[cfg(unix)]
#[test]
fn closed_stdout_pipe_is_quiet() {
    use std::io::Read;
    use std::os::unix::process::ExitStatusExt;
    use std::process::Stdio;

    let dir = scratch("pipe");
    let domain = write_unit_square(&dir);
    let mut child = bin()
        .args([
            "sweep",
            "--domain",
            domain.to_str().unwrap(),
            "--lambda-max",
            "3000",
            "--points",
            "2000",
        ])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // Read a few bytes, then drop the read end while the writer is mid-table.
    let mut head = [0u8; 256];
    child.stdout.as_mut().unwrap().read_exact(&mut head).unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    let mut err = String::new();
    child.stderr.take().unwrap().read_to_string(&mut err).unwrap();
    assert!(!err.contains("panicked"), "broken pipe must not panic: {err}");
    // Either the writer finished the table first (success) or it died on
    // SIGPIPE; both are quiet.
    assert!(
        status.success() || status.signal() == Some(13),
        "unexpected status: {status:?}"
    );
}
