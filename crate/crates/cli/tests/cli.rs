use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn twinfield(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twinfield"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_error(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stderr).expect("structured error on stderr");
    v["error"].clone()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

#[test]
fn invariance_suite_passes_by_default() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["invariance-suite"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&dir.path().join("invariance_suite.json"));
    assert_eq!(report["pass"], true);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["check_name"].as_str().unwrap()).collect();
    for want in ["vacuum_invariance", "commutation_preservation", "c_operator_transform", "trace_invariance", "reduction_identity"] {
        assert!(names.contains(&want), "{want} missing");
    }
    for c in report["checks"].as_array().unwrap() {
        assert!(c["max_residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn absurd_label_tolerance_fails() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["invariance-suite", "--tol", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_error(&o)["kind"], "ChecksFailed");
    let report = read_json(&dir.path().join("invariance_suite.json"));
    let label = report["checks"].as_array().unwrap().iter().find(|c| c["check_name"] == "label_resolution").unwrap();
    assert_eq!(label["pass"], false);
    assert!(label["max_residual"].as_f64().unwrap() > 0.0);
}

#[test]
fn same_seed_same_bytes() {
    let (a, b, c) = (TempDir::new().unwrap(), TempDir::new().unwrap(), TempDir::new().unwrap());
    let oa = twinfield(a.path(), &["invariance-suite", "--seed", "17"]);
    let ob = twinfield(b.path(), &["invariance-suite", "--seed", "17"]);
    let oc = twinfield(c.path(), &["invariance-suite", "--seed", "18"]);
    let file = "invariance_suite.json";
    assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap());
    assert_eq!(oa.stdout, ob.stdout);
    assert_ne!(oa.stdout, oc.stdout);
}

#[test]
fn scan_single_point_identity() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["propagator-scan", "--t", "1", "--r", "2", "--speeds", "0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("propagator_scan.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].get(6).unwrap().parse::<f64>().unwrap(), 0.0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("max deviation"));
}

#[test]
fn scan_grid_row_count_and_order() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["propagator-scan", "--threads", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let headers = csv::Reader::from_path(dir.path().join("propagator_scan.csv")).unwrap().headers().unwrap().clone();
    assert_eq!(&headers.iter().take(6).collect::<Vec<_>>(), &["t", "r", "boost_speed", "re", "im", "err_estimate"]);
    let rows = csv_rows(&dir.path().join("propagator_scan.csv"));
    assert_eq!(rows.len(), 75);
    let keys: Vec<(f64, f64, f64)> =
        rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    let summary = read_json(&dir.path().join("propagator_scan.json"));
    assert_eq!(summary["rows"], 75);
    assert!(summary["max_re_deviation"].as_f64().unwrap() < 1e-8);

    let single = TempDir::new().unwrap();
    twinfield(single.path(), &["propagator-scan", "--threads", "1"]);
    assert_eq!(
        fs::read(dir.path().join("propagator_scan.csv")).unwrap(),
        fs::read(single.path().join("propagator_scan.csv")).unwrap()
    );
}

#[test]
fn scan_contrast_columns() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["propagator-scan", "--t", "1", "--r", "2", "--speeds", "0.5", "--contrast"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(dir.path().join("pauli_jordan.csv")).unwrap();
    let h = rdr.headers().unwrap().clone();
    let col = |name: &str| h.iter().position(|x| x == name).unwrap();
    let row = rdr.records().next().unwrap().unwrap();
    let get = |name: &str| row[col(name)].parse::<f64>().unwrap();
    assert!(get("ordinary_im").abs() < 10.0 * get("ordinary_err"));
    assert!(get("tachyonic_im").abs() > 1e-4);
}

#[test]
fn boost_demo_outcomes() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["boost-demo", "--k", "1.5,0,0", "--speed", "0.9"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("Flipped"));
    let d = read_json(&dir.path().join("boost_demo.json"));
    assert_eq!(d["classification"], "Flipped");
    let lx = d["boosted_label"]["k"][0].as_f64().unwrap();
    assert!((lx + 1.1328).abs() < 1e-4, "{lx}");
    assert_eq!(d["schmidt_rank_after"], 1);
    assert_eq!(d["superposition"]["schmidt_rank_after"], 2);

    let o = twinfield(dir.path(), &["boost-demo", "--speed", "0.5"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("Preserved"));

    let o = twinfield(dir.path(), &["boost-demo", "--speed", "0.7454", "--degenerate-eps", "1e-3"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_error(&o);
    assert_eq!(e["kind"], "DegenerateBoost");
    assert!((e["details"]["threshold_speed"].as_f64().unwrap() - 0.745356).abs() < 1e-6);
    assert!(e["message"].as_str().unwrap().contains("0.745356"));
}

#[test]
fn yukawa_default_process_is_covariant() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["yukawa-covariance", "--speeds", "0.3,0.9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("yukawa_covariance.json"));
    assert_eq!(r["pass"], true);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row["residual"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn yukawa_process_file_round_trip_and_off_shell() {
    let dir = TempDir::new().unwrap();
    twinfield(dir.path(), &["yukawa-covariance", "--speeds", ""]);
    let report = read_json(&dir.path().join("yukawa_covariance.json"));
    assert_eq!(report["rows"].as_array().unwrap().len(), 0);

    let good = dir.path().join("good.json");
    fs::write(&good, serde_json::to_string(&report["process"]).unwrap()).unwrap();
    let o = twinfield(dir.path(), &["yukawa-covariance", "--process", good.to_str().unwrap(), "--speeds", "0.6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let mut bad = report["process"].clone();
    bad["legs"][2]["momentum"][0] = Value::from(0.5);
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    let o = twinfield(dir.path(), &["yukawa-covariance", "--process", bad_path.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(stderr_error(&o)["kind"], "OffShellLeg");
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# test run\nmass = 2.0\nseed = 5\nlabel-tol = 10\n").unwrap();
    let o = twinfield(dir.path(), &["invariance-suite", "--config", cfg.to_str().unwrap(), "--tol", "1e-9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("invariance_suite.json"));
    assert_eq!((r["mass"].as_f64(), r["seed"].as_u64(), r["label_tol"].as_f64()), (Some(2.0), Some(5), Some(1e-9)));

    fs::write(&cfg, "{\"mass\": -1}").unwrap();
    let o = twinfield(dir.path(), &["invariance-suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error(&o)["kind"], "Config");
}

#[test]
fn usage_errors_are_structured() {
    let dir = TempDir::new().unwrap();
    let o = twinfield(dir.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_error(&o)["kind"], "Usage");
    let o = twinfield(dir.path(), &["propagator-scan", "--t", "0:1"]);
    assert_eq!(stderr_error(&o)["kind"], "Usage");
}
