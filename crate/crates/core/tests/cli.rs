use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn shiftlike(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftlike")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_reports_constants() {
    let cfg = fixture("dyadic.json");
    let out = shiftlike(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["star_constant"], "2");
    assert_eq!(doc["result"]["distortion_constant"], "1");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn strict_pure_window_is_inconclusive() {
    let cfg = fixture("window.json");
    let out = shiftlike(&["criteria", "--strict", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let relaxed = shiftlike(&["criteria", "--config", cfg.to_str().unwrap()]);
    assert_eq!(relaxed.status.code(), Some(0));
}

#[test]
fn semicheck_is_exact() {
    let cfg = fixture("dyadic.json");
    let out = shiftlike(&["semicheck", "--samples", "100", "--seed", "7", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["all_exact_zero"], true);
    assert_eq!(doc["result"]["max_defect"], 0.0);
}

#[test]
fn criteria_on_dyadic_config() {
    let cfg = fixture("dyadic.json");
    let out = shiftlike(&["criteria", "--strict", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let reports = doc["result"].as_array().unwrap();
    let hc = reports.iter().find(|r| r["criterion"] == "hypercyclicity_iii").unwrap();
    assert_eq!(hc["verdict"], "satisfied");
    assert_eq!(hc["witness"]["n_k"], "k");
    assert_eq!(hc["witness"]["r_left"], "1/2");
}

#[test]
fn short_horizon_fails_weak_mixing() {
    let cfg = fixture("dyadic.json");
    let out = shiftlike(&["criteria", "--horizon", "3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));
}

#[test]
fn malformed_config_names_location() {
    let dir = std::env::temp_dir().join(format!("shiftlike-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"p\": \"1\",\n \"window\": {\"min\": 0, \"max\": true}}").unwrap();
    let out = shiftlike(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("window.max"), "{err}");

    std::fs::write(&bad, r#"{"p":"1","window":{"min":0,"max":0},"cells":["W"],"mu":{"0":["0"]}}"#).unwrap();
    let out = shiftlike(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu.0[0]"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_errors() {
    assert_eq!(shiftlike(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(shiftlike(&["validate"]).status.code(), Some(64));
    assert_eq!(shiftlike(&["--help"]).status.code(), Some(0));
    assert_eq!(shiftlike(&["--version"]).status.code(), Some(0));
}

#[test]
fn csv_output_has_header_and_hash() {
    let cfg = fixture("dyadic.json");
    let out = shiftlike(&["weights", "--output", "csv", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), ["k", "wp", "w", "config_sha256", "version"]);
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 40);
    assert_eq!(&rows[0][1], "1/2");
    assert_eq!(&rows[39][1], "2");
}

#[test]
fn orbit_writes_report_file() {
    let cfg = fixture("dyadic.json");
    let target = std::env::temp_dir().join(format!("shiftlike-orbit-{}.json", std::process::id()));
    let out = shiftlike(&["orbit", "--seed", "1", "--out", target.to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&target).unwrap()).unwrap();
    assert_eq!(doc["result"]["density"]["fraction"], 1.0);
    for d in doc["result"]["defects"].as_array().unwrap() {
        assert!(d.as_f64().unwrap() <= 0.01);
    }
    let _ = std::fs::remove_file(&target);
}
