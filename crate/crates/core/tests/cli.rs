//! The `revivals` binary: exit codes, output formats and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn revivals(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revivals")).args(args).output().expect("run revivals")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn scan_writes_csv_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scan.csv");
    let out = revivals(&["scan", "--set", "scan.points=64", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,correlation");
    assert_eq!(lines.len(), 66);
    // 17 significant digits
    assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0");
    let last: Vec<f64> = lines[65].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], std::f64::consts::TAU);
    assert!(last[1] > 1.0 - 1e-9);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = write(dir.path(), "bad.toml", "[scan]\npoints = 10\nstep = 0.1\n");
    let broken = write(dir.path(), "broken.toml", "[scan\n");
    for args in [
        vec!["scan", "--config", bad_key.as_str()],
        vec!["scan", "--config", broken.as_str()],
        vec!["scan", "--config", "/nonexistent/config.toml"],
        vec!["scan", "--set", "scan.points=0"],
        vec!["scan", "--set", "tolerances.tail_tol=-1"],
        vec!["fractional", "--set", "fractional.r=2", "--set", "fractional.s=4"],
        vec!["strobe", "--set", "strobe.nu1=nan"],
        vec!["frobnicate"],
    ] {
        let out = revivals(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn numerical_failures_exit_3() {
    // a Pöschl-Teller well with three levels cannot hold a |z| = 3 packet
    let out = revivals(&[
        "scan",
        "--set",
        "spectrum.kind=poschl-teller",
        "--set",
        "spectrum.a=1.0",
        "--set",
        "spectrum.c=6.0",
        "--set",
        "packet.re=3.0",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // too narrow a window to see two returns
    let out = revivals(&["threegap", "--set", "recurrence.epsilon=1e-9", "--set", "recurrence.horizon=100"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fractional_report() {
    let out = revivals(&["fractional"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["classification"]["case"], "rational");

    let v = json(&revivals(&["fractional", "--set", "fractional.s=3"]));
    assert!(v["components"].as_array().unwrap().len() <= 3);
    assert_eq!(v["l"], 6);
}

#[test]
fn berry_report() {
    let out = revivals(&["berry"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["gammas"].as_array().unwrap().len(), 3);
    for key in ["theta0", "theta1", "theta2", "fit_residual"] {
        assert!(v["theta"][key].is_number());
    }
    assert!(v["stokes"]["lhs"].is_number() && v["nu"]["raw"].as_array().unwrap().len() == 3);

    let v = json(&revivals(&["berry", "--set", "loop.b=[0.0, 0.0]"]));
    assert!(v["gammas"].as_array().unwrap().iter().all(|g| g.as_f64() == Some(0.0)));
    assert_eq!(v["theta"]["theta2"].as_f64(), Some(0.0));

    let tuned = json(&revivals(&["berry", "--set", "berry.tune=true"]));
    assert!(tuned["nu2_residual"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn strobe_csv() {
    let out = revivals(&[
        "strobe",
        "--set",
        "strobe.steps=10",
        "--set",
        &format!("strobe.nu1={}", std::f64::consts::TAU / 5.0),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,correlation,theta_k"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let k: u64 = row[0].parse().unwrap();
        let c: f64 = row[1].parse().unwrap();
        assert_eq!(k.is_multiple_of(5), c > 1.0 - 1e-12, "k={k} C={c}");
    }
}

#[test]
fn tuned_run_has_no_fractional_revivals() {
    let tuned = json(&revivals(&["threegap"]));
    assert_eq!(tuned["fractional_events"]["count"], 0);
    assert!(tuned["distinct_gaps"].as_array().unwrap().len() <= 3);
    assert_eq!(tuned["three_gap_ok"], true);
    assert!(tuned["relative_deviation"].as_f64().unwrap().abs() < 0.02);

    let untuned = json(&revivals(&["threegap", "--set", "strobe.nu2=0.7853981633974483"]));
    assert!(untuned["fractional_events"]["count"].as_u64().unwrap() > 0);
}

#[test]
fn berry_nu_feeds_strobe() {
    let out =
        revivals(&["strobe", "--set", "strobe.source=loop", "--set", "berry.tune=true", "--set", "strobe.steps=50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().count(), 52);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        write(dir.path(), "run.toml", "seed = 99\n[recurrence]\nhorizon = 50000\ntrials = 6\n[strobe]\nsteps = 200\n");
    for cmd in ["threegap", "strobe", "scan", "berry", "fractional"] {
        let a = revivals(&[cmd, "--config", &cfg]);
        let b = revivals(&[cmd, "--config", &cfg]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let a = json(&revivals(&["threegap", "--config", &cfg]));
    let c = json(&revivals(&["threegap", "--config", &cfg, "--seed", "100"]));
    assert_eq!(a["trials"].as_array().unwrap().len(), 6);
    assert_ne!(a["trials"], c["trials"]);
}
