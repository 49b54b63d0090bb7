//! End-to-end behaviour of the binary: exit codes, configuration handling
//! and the shape of the emitted files.

use std::path::Path;
use std::process::{Command, Output};

use giant_atom_cli::output::fmt_f64;
use proptest::prelude::*;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_giant-atom"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn rates_report_matches_closed_forms() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["rates", "--geometry", "two:pi/2"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lamb_shift_over_gamma"], 0.25);
    assert_eq!(v["gamma_real_over_gamma"], 0.5);
    assert_eq!(v, serde_json::from_str::<serde_json::Value>(&read(d.path(), "rates.json")).unwrap());

    let o = run(&["rates", "--geometry", "equal:3:pi"], d.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["gamma_real_over_gamma"].as_f64().unwrap(), 1.0 / 9.0);
    let o = run(&["rates", "--geometry", "equal:4:pi"], d.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decoupled"], true);
}

#[test]
fn csv_files_carry_metadata_and_fixed_headers() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["single", "--grid", "-1:1:41"], d.path()).status.code(), Some(0));
    let text = read(d.path(), "single.csv");
    let meta: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(meta[0], format!("# giant-atom {}", env!("CARGO_PKG_VERSION")));
    assert!(meta.iter().any(|l| l.starts_with("# units: ")));
    assert!(meta.iter().any(|l| l.starts_with("# config: {")));
    let mut rows = text.lines().skip(meta.len());
    assert_eq!(rows.next(), Some("delta,beta1,R,re_t_bar,im_t_bar,re_r_bar,im_r_bar"));
    let body: Vec<&str> = rows.collect();
    assert_eq!(body.len(), 41 * 6);
    assert!(!text.contains('\r'));
    // At the Lamb shift of β₁ = π/2 the reflection is complete.
    let peak = body.iter().find(|l| l.starts_with("2.500000000000e-01,1.570796326795e+00,")).unwrap();
    assert!(peak.split(',').nth(2).unwrap().starts_with("1.000000000000e+00"));
}

#[test]
fn spatial_files_and_antibunching() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["spatial", "--grid", "-4:4:41"], d.path()).status.code(), Some(0));
    for name in ["spatial_t2.csv", "spatial_r2.csv", "spatial_rt.csv"] {
        let text = read(d.path(), name);
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(header, "x1_bar,x2_bar,x1,x2,abs2,re,im");
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 41 * 41);
    }
    let r2 = read(d.path(), "spatial_r2.csv");
    for line in r2.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let c: Vec<&str> = line.split(',').collect();
        if c[0] == c[1] {
            assert!(c[4].parse::<f64>().unwrap() < 1e-12, "{line}");
        }
    }
}

#[test]
fn momentum_peaks_report() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["momentum", "--geometry", "two:0.5pi", "--pair.delta_e1", "2", "--grid", "-4:4:201"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&read(d.path(), "peaks.json")).unwrap();
    // Four analytic positions at ±(δE₁/2 − Δ_L)/(Γ/2) = ±1.5.
    let pos = v["analytic"]["positions"].as_array().unwrap();
    assert_eq!(pos.len(), 4);
    assert!(pos.iter().all(|p| (p[0].as_f64().unwrap().abs() - 1.5).abs() < 1e-12));
    assert_eq!(v["grid_local_maxima"].as_array().unwrap().len(), 4);
}

#[test]
fn nscaling_table() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(&["nscaling", "--nscaling.n_list", "[1,2,3,5]"], d.path()).status.code(), Some(0));
    let text = read(d.path(), "nscaling.csv");
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["1", "2", "3", "5"]);
    assert_eq!(rows[1][4], "true");
    assert_eq!((rows[2][10], rows[2][11]), ("1/9", "81"));
    assert_eq!((rows[3][10], rows[3][11]), ("1/25", "625"));
}

#[test]
fn config_file_and_flag_precedence() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.json");
    std::fs::write(&cfg, r#"{"params": {"gamma": 2.0}, "geometry": "two:pi/2", "seed": 5}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["rates", "--config", c], d.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lamb_shift"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    let o = run(&["rates", "--config", c, "--params.gamma", "4"], d.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lamb_shift"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn invalid_configuration_exits_2() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["rates", "--geometry", "two:"][..],
        &["rates", "--params.gamma", "0"],
        &["rates", "--params.nope", "1"],
        &["spatial", "--grid", "1:0:5"],
        &["momentum", "--grid", "-1:1:1"],
        &["check", "--check.draws", "0"],
        &["rates", "--config", "/nonexistent/config.json"],
        &["nscaling", "--nscaling.n_list", "[0]"],
    ] {
        let o = run(args, d.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn check_suite_passes_and_depends_on_the_seed() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(&["check", "--seed", "1", "--check.draws", "1000"], a.path()).status.code(), Some(0));
    assert_eq!(run(&["check", "--seed", "2", "--check.draws", "1000"], b.path()).status.code(), Some(0));
    assert_ne!(read(a.path(), "check.json"), read(b.path(), "check.json"));
}

proptest! {
    #[test]
    fn floats_round_trip_to_thirteen_digits(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let s = fmt_f64(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 5e-13 * v.abs());
        let (m, e) = s.split_once('e').unwrap();
        prop_assert_eq!(m.trim_start_matches('-').len(), 14);
        prop_assert!(e.starts_with('+') || e.starts_with('-'));
    }
}
