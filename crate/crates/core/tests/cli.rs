mod common;

use std::f64::consts::PI;
use std::process::{Command, Output};

use common::*;
use serde_json::Value;
use stellar_gfun::rates::{self, RateParams};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stellar-gfun")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

fn table(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn linear_table_has_surface_row() {
    let out = stdout(&["stellar", "--model", "linear", "--grid", "11"]);
    assert!(!out.contains('\r'));
    let (h, rows) = table(&out);
    let profile: Vec<_> = rows.iter().filter(|r| r[0] == "profile").collect();
    assert_eq!(profile.len(), 12);
    let p = column(&h, "P");
    assert_eq!(profile.last().unwrap()[p].parse::<f64>().unwrap(), 0.0);
    let lum: Vec<_> = rows.iter().filter(|r| r[0] == "luminosity").collect();
    assert_eq!(lum.len(), 1);
    assert!(!lum[0][column(&h, "L_closed_form")].is_empty());
    assert!(!lum[0][column(&h, "L_oracle")].is_empty());
    // 17 significant digits in scientific notation
    for cell in &profile[3][1..7] {
        let mantissa = cell.split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17, "{cell}");
    }
}

#[test]
fn power_law_unit_delta_reproduces_linear_table() {
    let lin = stdout(&["stellar", "--model", "linear", "--grid", "20"]);
    let pl = stdout(&["stellar", "--model", "power-law", "--delta", "1", "--grid", "20"]);
    let (h, a) = table(&lin);
    let (_, b) = table(&pl);
    let shared = |s: &str| format!("{:.9e}", s.parse::<f64>().unwrap());
    for name in ["x", "rho", "M", "P", "T", "eps"] {
        let c = column(&h, name);
        for (ra, rb) in a.iter().zip(&b).filter(|(r, _)| r[0] == "profile") {
            assert_eq!(shared(&ra[c]), shared(&rb[c]), "column {name}");
        }
    }
}

#[test]
fn two_parameter_json_mass() {
    let doc = json(&["stellar", "--model", "two-parameter", "--delta", "2", "--gamma", "2", "--grid", "10"]);
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["meta"]["config"]["stellar"]["model"], "two-parameter");
    let records = doc["records"].as_array().unwrap();
    let surface = records.iter().filter(|r| r["record"] == "profile").last().unwrap();
    assert_eq!(surface["x"], 1.0);
    let (rho_c, radius) = (150.0, 6.957e10);
    let want = 4.0 * PI * rho_c * radius * radius * radius * tanh_sinh(|t| t * t * (1.0 - t * t).powi(2), 0.0, 1.0, 1e-14);
    assert!(rel(surface["M"].as_f64().unwrap(), want) < 1e-9);
}

#[test]
fn json_round_trips_exact_values() {
    let doc = json(&["rate", "--kind", "nonresonant", "--a", "1", "--v", "1", "--n", "1", "--m", "2", "--z", "1"]);
    let rec = &doc["records"][0];
    let lib = rates::n1(&RateParams { a: 1.0, v: 1, n: 1, m: 2, z: 1.0, ..RateParams::default() }).unwrap();
    assert_eq!(rec["closed_form"].as_f64().unwrap().to_bits(), lib.closed_form.value.to_bits());
    assert_eq!(rec["oracle"].as_f64().unwrap().to_bits(), lib.oracle.value.to_bits());
    assert_eq!(rec["agreement"].as_f64().unwrap().to_bits(), lib.agreement.unwrap().to_bits());
    // CSV carries the same bits
    let csv_out = stdout(&["rate", "--kind", "nonresonant", "--a", "1", "--v", "1", "--n", "1", "--m", "2", "--z", "1"]);
    let (h, rows) = table(&csv_out);
    let v: f64 = rows[0][column(&h, "closed_form")].parse().unwrap();
    assert_eq!(v.to_bits(), lib.closed_form.value.to_bits());
}

#[test]
fn output_is_deterministic() {
    let args = ["rate", "--kind", "screened", "--v", "2", "--sweep", "t=log0.2:5:9", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
    let args = ["stellar", "--model", "two-parameter", "--delta", "1.5", "--gamma", "0.7"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn collision_record() {
    let doc = json(&["rate", "--kind", "collision", "--nu", "0", "--z", "1"]);
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0]["agreement"].as_f64().unwrap() <= 1e-6);
    let want = exp_sinh(|y| (-y - 1.0 / y.sqrt()).exp(), 0.0, 1e-13);
    assert!(rel(records[0]["closed_form"].as_f64().unwrap(), want) < 1e-9);
}

#[test]
fn unscreened_rate_is_a_gamma_integral() {
    let doc = json(&["rate", "--kind", "screened", "--z", "0", "--v", "2", "--a", "2"]);
    let cf = doc["records"][0]["closed_form"].as_f64().unwrap();
    assert!(rel(cf, 2.0 / 8.0) < 1e-15);
}

#[test]
fn divergent_resonant_series_falls_back_with_note() {
    let doc = json(&["rate", "--kind", "resonant", "--a", "1", "--q", "0.5", "--n", "1", "--m", "2", "--b", "2", "--g", "1"]);
    let rec = &doc["records"][0];
    assert_eq!(rec["method"], "oracle");
    assert!(rec["closed_form"].is_null());
    assert!(rec["notes"].as_str().unwrap().contains("diverge"));
}

#[test]
fn every_fallback_is_explained() {
    let doc = json(&["rate", "--kind", "nonresonant", "--v", "2", "--n", "2", "--m", "3", "--sweep", "a=log0.05:50:12"]);
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 12);
    let mut previous = 0.0;
    for rec in records {
        let a = rec["a"].as_f64().unwrap();
        assert!(a > previous, "records out of input order");
        previous = a;
        if rec["method"] != "closed-form" {
            assert!(!rec["notes"].as_str().unwrap().is_empty(), "{rec}");
        }
    }
    assert_eq!(records[0]["a"], 0.05);
    assert_eq!(records[11]["a"], 50.0);
}

#[test]
fn sweep_with_integer_parameter() {
    let doc = json(&["rate", "--kind", "truncated", "--sweep", "v=0:3:4", "--d", "2"]);
    let vs: Vec<u64> = doc["records"].as_array().unwrap().iter().map(|r| r["v"].as_u64().unwrap()).collect();
    assert_eq!(vs, vec![0, 1, 2, 3]);
    let out = run(&["rate", "--kind", "truncated", "--sweep", "v=0:1:3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_input_exits_one_without_output() {
    let dir = std::env::temp_dir().join(format!("stellar-gfun-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let p = path.to_str().unwrap();
    for args in [
        vec!["rate", "--kind", "nonresonant", "--a", "-1", "--out", p],
        vec!["rate", "--kind", "nonresonant", "--sweep", "a=-1:1:3", "--out", p],
        vec!["stellar", "--model", "power-law", "--out", p],
        vec!["stellar", "--model", "linear", "--delta", "2", "--out", p],
        vec!["stellar", "--rho-c", "0", "--out", p],
        vec!["rate", "--kind", "nonresonant", "--bogus", "1", "--out", p],
        vec!["rate", "--kind", "nonresonant", "--sweep", "w=0:1:3", "--out", p],
        vec!["verify", "--only", "nope", "--out", p],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
        assert!(!path.exists(), "{args:?} left a file behind");
    }
    let out = run(&["rate", "--kind", "nonresonant", "--a", "-1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("a must be > 0"));

    // successful runs write the same bytes they would print
    let out = run(&["stellar", "--grid", "5", "--out", p]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["stellar", "--grid", "5"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_with_impossible_tolerance_reports_failures() {
    let out = run(&["verify", "--tol", "1e-15", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let records = doc["records"].as_array().unwrap();
    assert!(records.len() >= 10);
    assert!(records.iter().any(|r| r["status"] == "FAIL"));
    for r in records {
        assert!(r["id"].is_string() && r["worst"].is_number() && r["tolerance"] == 1e-15);
    }
}

#[test]
fn verify_subset_passes() {
    let out = stdout(&["verify", "--only", "C2", "--only", "C9"]);
    let (h, rows) = table(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[column(&h, "status")] == "PASS"));
}
