use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oscbath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscbath")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn rows(csv: &str) -> Vec<(f64, f64, String)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            let t = it.next().unwrap().parse().unwrap();
            let v = it.next().unwrap().parse().unwrap();
            (t, v, it.next().unwrap().to_owned())
        })
        .collect()
}

fn bose() -> f64 {
    1.0 / (2f64.exp() - 1.0)
}

// Decay from n0 toward the asymptote: peaks over successive windows shrink and
// stay above the late value; neighbouring samples move by a bounded amount.
fn assert_relaxation_shape(series: &[(f64, f64)], n0: f64, late: f64) {
    assert!(series.iter().all(|(_, v)| *v >= 0.0));
    let peak = |lo: f64, hi: f64| series.iter().filter(|(t, _)| *t >= lo && *t < hi).map(|p| p.1).fold(0.0, f64::max);
    let (p1, p2, p3) = (peak(1.0, 5.0), peak(5.0, 20.0), peak(20.0, 101.0));
    assert!(p1 < n0 && p1 > p2 && p2 > p3 && p3 > late * 0.99, "{p1} {p2} {p3}");
    for w in series.windows(2) {
        let slope = (w[1].1 - w[0].1).abs() / (w[1].0 - w[0].0);
        assert!(slope < 1.0, "jump near t = {}", w[0].0);
    }
    assert!((series.last().unwrap().1 - late).abs() < 1e-3);
}

#[test]
fn finite_mode_without_cavity_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"params":{"omega_bar":1,"g":0.1,"beta":2,"n0":1},"mode":"bare_finite","time_grid":{"t_min":0,"t_max":5,"points":3}}"#,
    );
    let out = oscbath(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cavity"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.json");
    assert_eq!(oscbath(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
    let broken = write_config(dir.path(), "b.json", "{ not json");
    assert_eq!(oscbath(&["run", "--config", &broken]).status.code(), Some(2));
    assert_eq!(oscbath(&["run"]).status.code(), Some(2));
    let bad_grid = write_config(
        dir.path(),
        "g.json",
        r#"{"params":{"omega_bar":1,"g":0.1,"beta":2,"n0":1},"mode":"bare_continuum","time_grid":{"t_min":0,"t_max":5,"points":3,"spacing":"log"}}"#,
    );
    assert_eq!(oscbath(&["run", "--config", &bad_grid]).status.code(), Some(2));
}

#[test]
fn numeric_failure_reports_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n.json",
        r#"{"params":{"omega_bar":1,"g":0.1,"beta":2,"n0":1},"mode":"dressed_continuum",
            "time_grid":{"t_min":40,"t_max":50,"points":2},"quad":{"rel_tol":1e-14,"abs_tol":1e-17,"max_panels":16}}"#,
    );
    let out = oscbath(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t = 40"));
}

#[test]
fn fig1_csv_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let out = oscbath(&["run", "--preset", "fig1", "--out", path.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("t,value,kind\n"));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r.2 == "bare_continuum"));
    assert_eq!((rows[0].0, rows[199].0), (1.0, 100.0));
    assert!((rows[0].1 - 0.763_507_066_808_296_6).abs() < 1e-10);
    assert!((rows[199].1 - 0.161_940_410_593_450_5).abs() < 1e-10);
    let series: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    assert_relaxation_shape(&series, 1.0, 0.161_940_410_593_450_5);

    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("trace.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["params"]["g"], 0.1);
    assert_eq!(meta["traces"][0]["params"]["beta"], 2.0);
    assert!(meta["traces"][0]["quad"]["rel_tol"].is_number());
    assert!(meta["git_describe"].is_string());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        assert!(oscbath(&["run", "--preset", "fig1", "--out", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let meta = |p: &Path| std::fs::read(oscbath_cli::sidecar_path(p)).unwrap();
    assert_eq!(meta(&a), meta(&b));
}

#[test]
fn json_schema() {
    let out = oscbath(&["run", "--preset", "fig1", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["params", "cavity", "quad", "git_describe"] {
        assert!(doc["meta"].get(key).is_some(), "missing meta.{key}");
    }
    let series = doc["series"].as_array().unwrap();
    assert_eq!(series.len(), 200);
    assert_eq!(series[0].as_array().unwrap().len(), 2);
}

#[test]
fn json_with_several_traces_is_an_array() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"params":{"omega_bar":1,"g":0.1,"beta":2,"n0":1},"mode":"compare_all","cavity":{"radius":20,"modes":64},
            "time_grid":{"t_min":0,"t_max":4,"points":5},"n0_sweep":[0,2],"output":{"format":"json"}}"#,
    );
    let out = oscbath(&["run", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let traces = doc.as_array().unwrap();
    assert_eq!(traces.len(), 8);
    assert_eq!(traces[4]["meta"]["label"], "bare_continuum[n0=2]");
    assert_eq!(traces[5]["meta"]["kind"], "dressed_continuum");
    assert!((traces[5]["series"][0][1].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn fig2_parameters_relax_to_dressed_asymptote() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "f2.json",
        r#"{"params":{"omega_bar":1,"g":0.1,"beta":2,"n0":1},"mode":"dressed_continuum",
            "time_grid":{"t_min":1,"t_max":100,"points":60,"spacing":"log"}}"#,
    );
    let out = oscbath(&["run", "--config", &cfg]);
    assert!(out.status.success());
    let rows = rows(&String::from_utf8(out.stdout).unwrap());
    let series: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    assert_relaxation_shape(&series, 1.0, 0.144_755_289_564_64);
}

#[test]
fn compare_fig1_over_initial_occupations() {
    let out = oscbath(&["compare", "--preset", "fig1", "--n0", "0,1,5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r["bose_reference"].as_f64().unwrap() - bose()).abs() < 1e-15);
    assert!(r["n0_independence_spread"].as_f64().unwrap() < 1e-3);
    assert!((r["asymptote_bare"].as_f64().unwrap() - 0.161_940_410_594).abs() < 1e-9);
    assert!((r["asymptote_dressed"].as_f64().unwrap() - 0.144_755_289_565).abs() < 1e-9);
    assert_eq!(r["flat_at_initial"], false);
}

#[test]
fn compare_decoupled_stays_flat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "g0.json",
        r#"{"params":{"omega_bar":1,"g":0,"beta":2,"n0":1},"mode":"compare_all","time_grid":{"t_min":1,"t_max":100,"points":2}}"#,
    );
    let out = oscbath(&["compare", "--config", &cfg, "--n0", "0,1,5"]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["flat_at_initial"], true);
    assert_eq!(r["asymptote_bare"], 1.0);
    assert_eq!(r["n0_independence_spread"], 5.0);
    assert!((r["max_rel_gap"].as_f64().unwrap() - (1.0 - bose()) / bose()).abs() < 1e-12);
}

#[test]
fn compare_needs_late_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "short.json",
        r#"{"params":{"omega_bar":1,"g":0.1,"beta":2,"n0":1},"mode":"compare_all","time_grid":{"t_min":1,"t_max":50,"points":2}}"#,
    );
    assert_eq!(oscbath(&["compare", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn divergence_probe_separates_vacuum_terms() {
    let out = oscbath(&["run", "--preset", "divergence-probe"]);
    assert!(out.status.success());
    let rows = rows(&String::from_utf8(out.stdout).unwrap());
    let peak = |kind: &str| rows.iter().filter(|r| r.2 == kind).map(|r| r.1).fold(0.0, f64::max);
    assert!(peak("bare_finite") > 0.05);
    assert!(peak("dressed_finite") < 1e-4 && peak("dressed_continuum") < 1e-4);
}
