use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hopflens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopflens"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn matrix(o: &Output) -> Vec<Vec<f64>> {
    stdout(o)
        .lines()
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn inverse_metric_at_origin() {
    let o = hopflens(&["metric", "--at", "0,0,0", "--inverse"]);
    assert!(o.status.success());
    assert_eq!(matrix(&o), vec![vec![1.5, 0.0, 0.0], vec![0.0, 1.5, 0.0], vec![0.0, 0.0, 1.0]]);
}

#[test]
fn metric_at_origin_has_fifteen_digits() {
    let o = hopflens(&["metric", "--at", "0,0,0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0.666666666666667 0 0\n"));
}

#[test]
fn malformed_coordinates_exit_2() {
    for at in ["1,2", "a,b,c", "1,2,inf"] {
        assert_eq!(hopflens(&["metric", "--at", at]).status.code(), Some(2), "{at}");
    }
    assert_eq!(hopflens(&["metric"]).status.code(), Some(2));
    assert_eq!(hopflens(&["metric", "--at", "0,0,0", "--bogus"]).status.code(), Some(2));
}

#[test]
fn toroidal_chart_violation_exit_2() {
    let o = hopflens(&["metric", "--toroidal", "--at", "0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("eta"));
}

#[test]
fn negative_coordinates_accepted() {
    let o = hopflens(&["ricci", "--at", "-1,-2,-0.5"]);
    assert!(o.status.success());
}

#[test]
fn ricci_at_origin() {
    let o = hopflens(&["ricci", "--at", "0,0,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-2");
}

#[test]
fn ricci_grid_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ricci.csv");
    let o = hopflens(&["ricci", "--grid", "-3,3,41", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z,R"));
    assert_eq!(lines.count(), 68921);
}

#[test]
fn ricci_invalid_grid_exit_2() {
    for g in ["-3,3,1", "3,-3,5", "0,1", "0,1,x"] {
        assert_eq!(hopflens(&["ricci", "--grid", g]).status.code(), Some(2), "{g}");
    }
}

#[test]
fn geodesic_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ray.csv");
    let o = hopflens(&[
        "geodesic", "--from", "3,0,0", "--dir", "-1,0,1", "--t-end", "2", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,x,y,z,vx,vy,vz,drift\n0,3,0,0,"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 2.0);
    assert!(last[7].abs() < 1e-6);
}

#[test]
fn geodesic_bad_tolerance_exit_2() {
    let o = hopflens(&["geodesic", "--from", "3,0,0", "--dir", "-1,0,0", "--rel-tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn charge_and_linking() {
    let o = hopflens(&["charge", "--a", "2", "--b", "1", "--linking"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let get = |key: &str| -> f64 {
        text.split_whitespace()
            .find_map(|w| w.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("whitehead=") - 2.0).abs() < 0.02);
    assert!((get("linking=") - 2.0).abs() < 0.02);
}

#[test]
fn charge_writes_curves() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("loop");
    let o = hopflens(&["charge", "--linking", "--curves", prefix.to_str().unwrap()]);
    assert!(o.status.success());
    for k in 1..=2 {
        let text = std::fs::read_to_string(dir.path().join(format!("loop_{k}.csv"))).unwrap();
        assert!(text.starts_with("index,x,y,z\n"));
        assert_eq!(text.lines().count(), 130);
    }
}

#[test]
fn validate_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = hopflens(&["validate", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS rhs_agreement"));
    assert!(!text.contains("FAIL"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);
}

#[test]
fn scenario_fig2_bundled_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig2.json");
    let o = hopflens(&[
        "scenario", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("rays=314 completed=314 aborted=0"));
    let csv = std::fs::read_to_string(dir.path().join("fig2_trajectories.csv")).unwrap();
    let ids: std::collections::BTreeSet<&str> =
        csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids.len(), 314);
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig2_diagnostics.json")).unwrap()).unwrap();
    assert_eq!(diag["aborted"], 0);
    assert_eq!(diag["wavefronts"].as_array().unwrap().len(), 8);
}

#[test]
fn scenario_outputs_are_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        let o = hopflens(&["scenario", "--builtin", "fig7", "--out-dir", d.path().to_str().unwrap()]);
        assert!(o.status.success());
    }
    for f in ["fig7_trajectories.csv", "fig7_diagnostics.json"] {
        let a = std::fs::read(d1.path().join(f)).unwrap();
        let b = std::fs::read(d2.path().join(f)).unwrap();
        assert!(a == b, "{f} differs between runs");
    }
}

#[test]
fn scenario_fig6_reports_focal_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig6.json");
    let o = hopflens(&[
        "scenario", "--config", cfg.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig6_diagnostics.json")).unwrap()).unwrap();
    assert!(diag["focal_points"].is_array());
    assert_eq!(diag["rays"], 12);
}

#[test]
fn scenario_missing_output_directory_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope");
    let o = hopflens(&["scenario", "--builtin", "fig3", "--out-dir", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!missing.exists());
}

#[test]
fn scenario_schema_violation_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(configs().join("fig4.json")).unwrap()).unwrap();
    v["integrator"]["h_max"] = serde_json::json!("big");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = hopflens(&["scenario", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("integrator.h_max"));
}

#[test]
fn scenario_degraded_exit_3() {
    // a tolerance no fixed 0.1 step can meet makes every ray underflow
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(configs().join("fig3.json")).unwrap()).unwrap();
    v["integrator"] = serde_json::json!({"rel_tol": 1e-16, "abs_tol": 1e-16, "h_init": 0.1, "h_min": 0.1, "h_max": 0.1});
    let path = dir.path().join("degraded.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = hopflens(&["scenario", "--config", path.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    // outputs are still written for inspection
    assert!(dir.path().join("fig3_diagnostics.json").exists());
}

#[test]
fn unknown_subcommand_exit_2() {
    assert_eq!(hopflens(&["teleport"]).status.code(), Some(2));
}
