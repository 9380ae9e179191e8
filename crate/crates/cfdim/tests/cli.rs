//! End-to-end tests of the `cfdim` binary: documented examples, exit codes,
//! output formats and configuration re-runs.

mod common;

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cfdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfdim"))
        .args(args)
        .env_remove("CFDIM_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn expand_sqrt_two() {
    let out = cfdim(&["expand", "--surd", "2", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "cfdim/expand/v1");
    assert_eq!(v["result"]["digits"], serde_json::json!([2, 2, 2, 2, 2, 2, 2, 2, 2, 2]));
    assert_eq!(v["result"]["end"], "open");
    let row = &v["result"]["table"][1];
    assert_eq!((row["p"].as_str(), row["q"].as_str()), (Some("2"), Some("5")));
    // |I_2| = 1/(q_2 (q_2 + q_1)) = 1/(5 · 7)
    assert_eq!(row["length"], "1/35");
}

#[test]
fn expand_general_surd_form() {
    // (0 + 1·√2)/1 − 1 written as (−1 + √2)/1.
    let out = cfdim(&["expand", "--surd", "sqrt:2,-1,1,1", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["digits"], serde_json::json!([2, 2, 2, 2, 2]));
}

#[test]
fn expand_rational_is_exhausted() {
    let out = cfdim(&["expand", "--rational", "5/8", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!(r["digits"], serde_json::json!([1, 1, 1, 2]));
    assert_eq!(r["end"], "terminated");
    assert_eq!(r["exhausted"], true);
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        &["expand", "--rational", "5/x"][..],
        &["expand", "--surd", "2,1"],
        &["expand", "--rational", "1/2", "--surd", "2"],
        &["dim", "--kind", "nonsense"],
        &["frobnicate"],
        &["verify", "--suite", "no-such-suite"],
    ] {
        assert_eq!(cfdim(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn range_errors_exit_3() {
    for args in [
        &["expand", "--rational", "9/8"][..],
        &["expand", "--target", "0"],
        &["dim", "--kind", "spectral", "--alpha", "3/2"],
        &["dim", "--kind", "full", "--alpha", "1/2", "--curve", "B=2..4"],
        &["cantor", "--nu-hat", "2", "--nu", "1"],
    ] {
        let out = cfdim(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn budget_exceeded_exits_4() {
    let out = cfdim(&["dim", "--kind", "hat", "--B", "3", "--alpha", "1/4", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn failed_check_exits_1_and_still_reports() {
    // Two samples of 10⁴ digits cannot meet the exceedance bound.
    let out = cfdim(&["verify", "--suite", "mc-nu-zero", "--samples", "2", "--n-digits", "10000", "--seed", "3"]);
    let v = json(&out);
    let failed = v["result"]["summary"]["failed"].as_u64().unwrap();
    assert_eq!(out.status.code(), Some(if failed > 0 { 1 } else { 0 }));
    assert!(v["result"]["checks"].as_array().unwrap().len() >= 3);
}

#[test]
fn lemma_suite_passes() {
    let out = cfdim(&["verify", "--suite", "lemmas", "--instances", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["summary"]["failed"], 0);
}

#[test]
fn dimension_examples() {
    let e_hat = json(&cfdim(&["dim", "--kind", "E_hat", "--nu-hat", "1", "--i", "1"]));
    assert_eq!(e_hat["result"]["value"], 0.5);
    let f = json(&cfdim(&["dim", "--kind", "F", "--alpha", "0.5"]));
    assert_eq!(f["result"]["value"], 0.5);
    assert_eq!(f["result"]["argument"], "1/1");
}

#[test]
fn alphabet_curve_is_csv_and_non_decreasing() {
    let out = cfdim(&["dim", "--kind", "nu_level", "--nu", "1", "--i", "1", "--curve", "B=2..6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["param", "value", "lo", "hi"]);
    let rows: Vec<(String, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.iter().map(|r| r.0.as_str()).collect::<Vec<_>>(), ["2", "3", "4", "5", "6"]);
    assert!(rows.windows(2).all(|w| w[1].1 >= w[0].1), "{rows:?}");
}

#[test]
fn cantor_samples_are_admissible() {
    let out = cfdim(&["cantor", "--nu-hat", "0.333", "--nu", "1", "--B", "3", "--depth-k", "8", "--sample", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &json(&out)["result"]["summary"];
    assert_eq!(s["samples"], 100);
    assert_eq!(s["admissible"], 100);
}

#[test]
fn cantor_output_round_trips_through_exponents() {
    let digits = scratch("roundtrip.digits");
    let path = digits.to_str().unwrap();
    let out = cfdim(&[
        "cantor", "--nu-hat", "1/3", "--nu", "1", "--B", "3", "--depth-k", "10", "--sample", "1", "--insert", "--digits-out", path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let est = json(&cfdim(&["exponents", "--target-i", "1", "--input", path, "--N", "1000000000"]));
    let r = &est["result"];
    assert!((r["nu_hat_est"].as_f64().unwrap() - 1.0 / 3.0).abs() < 0.1, "{r}");
    assert!((r["nu_est"].as_f64().unwrap() - 1.0).abs() < 0.1, "{r}");
    assert_eq!(r["horizon_clamped"], true);
}

#[test]
fn runlength_of_a_uniform_point() {
    let v = json(&cfdim(&["runlength", "--uniform", "100000"]));
    let r = &v["result"];
    assert_eq!(r["n"], 100000);
    let series = r["series"].as_array().unwrap();
    let last = series.last().unwrap()["r_over_log_phi_n"].as_f64().unwrap();
    assert!(last > 0.2 && last < 1.0, "{last}");
}

#[test]
fn echoed_config_file_reproduces_the_output() {
    let first = scratch("first.json");
    let second = scratch("second.json");
    let out = cfdim(&["cantor", "--nu-hat", "1/3", "--nu", "1", "--depth-k", "5", "--sample", "3", "--seed", "11", "--output", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = cfdim(&["--config", first.to_str().unwrap(), "--output", second.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    // Thread count is not part of the configuration and does not change the output.
    let threaded = Command::new(env!("CARGO_BIN_EXE_cfdim"))
        .args(["--config", first.to_str().unwrap()])
        .env("CFDIM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(threaded.stdout, fs::read(&first).unwrap());
}

#[test]
fn config_and_command_together_is_a_parse_error() {
    let first = scratch("conflict.json");
    fs::write(&first, common::run_args(&["expand", "--target", "1"]).text).unwrap();
    let out = cfdim(&["--config", first.to_str().unwrap(), "expand", "--target", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_output_carries_the_envelope() {
    for (name, args) in common::REPRO_CASES {
        let out = common::run_args(args);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        let cmd = args[0];
        assert_eq!(v["schema"], format!("cfdim/{cmd}/v1"), "{name}");
        assert_eq!(v["config"]["command"], cmd, "{name}");
        assert!(v["config"]["globals"]["seed"].is_u64(), "{name}");
        assert!(v["config"].get("threads").is_none(), "{name}");
    }
}
