use std::process::{Command, Output};

fn minlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minlen")).args(args).env("MINLEN_THREADS", "2").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV report, split into cells, header excluded.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn header_lines<'a>(text: &'a str, key: &str) -> Vec<&'a str> {
    let prefix = format!("# {key}=");
    text.lines().filter_map(|l| l.strip_prefix(prefix.as_str())).collect()
}

fn scan_sign_changes(kappa: &str, lo: &str) -> Vec<(f64, f64)> {
    let o = minlen(&["scan", "--kappa", kappa, "--equal-betas", "--omega-min", lo, "--grid", "40", "--no-timestamp"]);
    assert!(o.status.success());
    let pts: Vec<(f64, f64)> = rows(&stdout(&o)).iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    pts.windows(2).filter(|w| w[0].1 * w[1].1 < 0.0).map(|w| (w[0].0, w[1].0)).collect()
}

#[test]
fn spectrum_ground_state() {
    let o = minlen(&["spectrum", "--kappa", "0.75", "--equal-betas", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("# schema=1"));
    let r = rows(&text);
    assert_eq!(r.len(), 3);
    let w0: f64 = r[0][1].parse().unwrap();
    assert!((w0 - 0.07).abs() < 0.01);
    assert_eq!(r[0][3], "exact_deformed");
    assert!(r[0][2].is_empty(), "no energy without mass and betas");
}

#[test]
fn subcritical_spectrum_is_empty() {
    let o = minlen(&["spectrum", "--kappa", "0.05", "--equal-betas", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&stdout(&o)).is_empty());
}

#[test]
fn asymptotic_energy_ratio() {
    let o = minlen(&["spectrum", "--kappa", "0.75", "--method", "asymptotic", "--beta", "1e-4", "--beta-prime", "1e-4", "--mass", "1", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let e: Vec<f64> = rows(&stdout(&o)).iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(e.len() >= 2);
    let target = (2.0 * std::f64::consts::PI / 2.75f64.sqrt()).exp();
    for w in e.windows(2) {
        assert!((w[0] / w[1] / target - 1.0).abs() < 1e-10);
    }
}

#[test]
fn general_path_checks_equal_beta_consistency() {
    let o = minlen(&["spectrum", "--kappa", "2", "--levels", "2", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let checks = header_lines(&text, "check");
    assert!(checks.iter().any(|c| c.starts_with("equal_beta_consistency,pass")), "{checks:?}");
    let w0: f64 = rows(&text)[0][1].parse().unwrap();
    assert!((w0 - 0.37).abs() < 0.02);
}

#[test]
fn scan_sign_changes_match_figures() {
    let above: Vec<_> = scan_sign_changes("0.75", "0.001").into_iter().filter(|c| c.0 > 0.02).collect();
    assert_eq!(above.len(), 1);
    assert!(above[0].0 <= 0.07 && 0.07 <= above[0].1);
    let first = *scan_sign_changes("2", "0.001").last().unwrap();
    assert!(first.0 <= 0.38 && 0.36 <= first.1, "{first:?}");
    assert!(scan_sign_changes("0.05", "0.001").is_empty());
}

#[test]
fn ordinary_orthogonality_pins_reference_level() {
    let o = minlen(&["ordinary", "--mode", "orthogonality", "--e1", "-1", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r[0][1].parse::<f64>().unwrap(), -1.0);
    assert!(r.len() == 3);
}

#[test]
fn validate_default_passes() {
    let o = minlen(&["validate", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = rows(&stdout(&o));
    assert!(r.len() >= 8);
    assert!(r.iter().all(|c| c[1] == "pass"), "{r:?}");
}

#[test]
fn validate_at_critical_coupling_does_not_fail() {
    let o = minlen(&["validate", "--kappa", "0.0625", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let critical = rows(&text).into_iter().find(|c| c[0] == "critical_coupling").unwrap();
    assert_eq!(critical[1], "pass");
    assert!(critical[4].contains("threshold"));
}

#[test]
fn validate_with_vanishing_beta() {
    let o = minlen(&["validate", "--beta", "0", "--no-timestamp", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["beta"], 0.0);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "limit_b_tail_exponents" && c["status"] == "pass"));
}

#[test]
fn invalid_configuration_exits_2() {
    assert_eq!(minlen(&["spectrum", "--omega-min", "0.3", "--omega-max", "0.1"]).status.code(), Some(2));
    assert_eq!(minlen(&["spectrum", "--omega-max", "0.6"]).status.code(), Some(2));
    assert_eq!(minlen(&["spectrum", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(minlen(&["spectrum", "--equal-betas", "--beta-prime", "2"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_minlen")).args(["scan"]).env("MINLEN_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_without_timestamp() {
    let args = ["spectrum", "--kappa", "0.75", "--levels", "2", "--no-timestamp"];
    let a = minlen(&args);
    let b = minlen(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(header_lines(&stdout(&a), "generated_unix").is_empty());
    let c = minlen(&["spectrum", "--kappa", "0.75", "--levels", "2"]);
    assert_eq!(header_lines(&stdout(&c), "generated_unix").len(), 1);
}

#[test]
fn numbers_round_trip() {
    let o = minlen(&["spectrum", "--kappa", "0.75", "--equal-betas", "--levels", "1", "--no-timestamp"]);
    let cell = rows(&stdout(&o))[0][1].clone();
    let x: f64 = cell.parse().unwrap();
    assert_eq!(format!("{x:.16e}"), cell);
}

#[test]
fn json_report_structure() {
    let dir = std::env::temp_dir().join(format!("minlen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let o = minlen(&["spectrum", "--kappa", "0.75", "--equal-betas", "--format", "json", "--no-timestamp", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["config", "results", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["results"]["schema"], 1);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["method"], "exact_deformed");
    assert!(rows[0]["energy"].is_null());
    std::fs::remove_dir_all(&dir).unwrap();
}
