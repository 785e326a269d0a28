use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn diskops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskops"))
        .args(args)
        .env_remove("DISKOPS_OUTPUT")
        .env_remove("DISKOPS_TRUNCATION")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn temp_json(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn real(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a real number: {v}"))
}

#[test]
fn verify_pick_reports_counterexample() {
    let out = diskops(&["verify", "pick", "--output", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let reports = json(&out);
    let ids: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["check_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let r = reports.as_array().unwrap().iter().find(|r| r["check_id"] == "scalar_pick_counterexample_values").unwrap();
    assert_eq!(r["status"], "pass");
    let computed = r["computed"].as_array().unwrap();
    let get = |l: &str| real(&computed.iter().find(|c| c["label"] == l).unwrap()["value"]);
    assert!((get("pick_condition") - 1.1409).abs() < 5e-4);
    assert!((get("attainability_sum") - 0.0706).abs() < 5e-4);
}

#[test]
fn verify_text_ends_with_summary() {
    let out = diskops(&["verify", "kernels"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.trim_end().ends_with("0 failed"), "{text}");
    assert!(text.contains("kernel_closed_form_S12"));
}

#[test]
fn verify_csv_has_row_per_check() {
    let out = diskops(&["verify", "blaschke", "--output", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert!(rows[0].starts_with("check_id,status"));
    assert!(rows.len() > 5);
    assert!(rows.iter().any(|r| r.starts_with("adjoint_distinctness,pass")));
}

#[test]
fn env_var_sets_output_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_diskops"))
        .args(["kernel", "S12", "0", "0.5"])
        .env("DISKOPS_OUTPUT", "json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["kernel"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn kernel_value_in_text_has_fifteen_digits() {
    let out = diskops(&["kernel", "D2", "1", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("kernel")).unwrap();
    // 2 ln 2
    assert!(line.contains("(1.38629436111989e0, 0.00000000000000e0)"), "{line}");
}

#[test]
fn kernel_accepts_negative_complex_arguments() {
    let out = diskops(&["kernel", "H2", "-0.5", "0.2-0.4i", "--output", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let k = &json(&out)["kernel"];
    // 1/(1 − w̄z) with w̄z = −0.1 + 0.2i
    let expect = num_complex_inverse(1.1, -0.2);
    assert!((real(&k[0]) - expect.0).abs() < 1e-15 && (real(&k[1]) - expect.1).abs() < 1e-15);
}

fn num_complex_inverse(re: f64, im: f64) -> (f64, f64) {
    let d = re * re + im * im;
    (re / d, -im / d)
}

#[test]
fn norm_of_series_file() {
    let f = temp_json("[[1.0, 0.0], [0.0, 1.0]]");
    let out = diskops(&["norm", "S12", f.path().to_str().unwrap(), "--output", "json"]);
    assert!(out.status.success());
    let j = json(&out);
    // 1 + 3
    assert_eq!(real(&j["norm_sq"]), 4.0);
    // |1 + iz| peaks at z = −i
    assert!((real(&j["sup_norm"]) - 2.0).abs() < 1e-12);
}

#[test]
fn opnorm_multiplication_and_composition() {
    let f = temp_json("[[1.0, 0.0], [1.0, 0.0]]");
    let out = diskops(&["opnorm", "S12", "mult", f.path().to_str().unwrap(), "--truncation", "512", "--output", "json"]);
    assert!(out.status.success());
    let j = json(&out);
    assert!(real(&j["compression_norm"]) > 4.5f64.sqrt());

    let phi = temp_json("[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]");
    let out = diskops(&["opnorm", "S12", "comp", phi.path().to_str().unwrap(), "--output", "json"]);
    assert!(out.status.success());
    let j = json(&out);
    assert!((real(&j["exact_norm"]) - 2.0).abs() < 1e-8);
    assert!(real(&j["compression_norm"]) <= 2.0);
}

#[test]
fn composition_rejects_non_self_map() {
    let phi = temp_json("[[1.2, 0.0], [0.1, 0.0]]");
    let out = diskops(&["opnorm", "S12", "comp", phi.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn isometry_defects() {
    let psi = temp_json(r#"{"a": [1.0, 0.0], "zeros": [[0.0, 0.0], [0.4, 0.0]]}"#);
    let out = diskops(&["isometry", "S12", psi.path().to_str().unwrap(), "3", "--truncation", "512", "--output", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json(&out);
    assert!(real(&j["max_abs_defect"]) < 1e-8);
    assert_eq!(real(&j["shift_isometry_order"]), 3.0);

    let out = diskops(&["isometry", "S12", psi.path().to_str().unwrap(), "2", "--output", "json"]);
    assert!(real(&json(&out)["max_abs_defect"]) > 0.1);
}

#[test]
fn pick_problem_file() {
    let p = temp_json(r#"{"space": "H2", "nodes": [[0.0, 0.0], [0.5, 0.0]], "targets": [[0.0, 0.0], [0.9, 0.0]]}"#);
    let out = diskops(&["pick", p.path().to_str().unwrap(), "--output", "json"]);
    assert!(out.status.success());
    let j = json(&out);
    // Schwarz: |f(1/2)| ≤ 1/2 fails
    assert_eq!(j["psd"], false);

    let p = temp_json(r#"{"space": "H2", "nodes": [[0.0, 0.0], [0.5, 0.0]], "targets": [[0.0, 0.0], [0.4, 0.0]]}"#);
    let out = diskops(&["pick", p.path().to_str().unwrap(), "--output", "json"]);
    assert_eq!(json(&out)["psd"], true);
}

#[test]
fn invalid_config_is_rejected() {
    let out = diskops(&["verify", "kernels", "--truncation", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = diskops(&["verify", "kernels", "--quad-nodes", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    let out = diskops(&["verify", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn missing_file_is_an_error() {
    let out = diskops(&["norm", "S12", "/nonexistent/series.json"]);
    assert_eq!(out.status.code(), Some(2));
}
