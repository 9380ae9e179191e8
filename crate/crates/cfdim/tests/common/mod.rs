//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use clap::Parser;

use cfdim::cli::Cli;
use cfdim::{Config, Output};

/// Parse a command line (without the program name) into a configuration.
pub fn config_of(args: &[&str]) -> Config {
    let argv = std::iter::once("cfdim").chain(args.iter().copied());
    Cli::try_parse_from(argv)
        .unwrap_or_else(|e| panic!("arguments {args:?} do not parse: {e}"))
        .config()
        .expect("configuration")
}

/// Run a command line in-process.
pub fn run_args(args: &[&str]) -> Output {
    cfdim::run(&config_of(args)).unwrap_or_else(|e| panic!("{args:?} failed: {e}"))
}

/// Run a command line and parse its JSON `result`.
pub fn result_of(args: &[&str]) -> serde_json::Value {
    let out = run_args(args);
    let v: serde_json::Value = serde_json::from_str(&out.text).expect("JSON output");
    v["result"].clone()
}

/// Command lines covering every command, used for the reproducibility and
/// golden-file checks. Paths are relative to the package root, which is
/// the working directory of integration tests.
pub const REPRO_CASES: &[(&str, &[&str])] = &[
    ("expand_surd", &["expand", "--surd", "2", "--n", "10"]),
    ("expand_rational", &["expand", "--rational", "5/8", "--n", "10"]),
    ("expand_decimal", &["expand", "--decimal", "0.14159265358979", "--n", "8", "--precision-bits", "64"]),
    ("expand_target", &["expand", "--target", "2", "--n", "12", "--table", "4"]),
    ("dim_e_hat", &["dim", "--kind", "E_hat", "--nu-hat", "1", "--i", "1"]),
    ("dim_f", &["dim", "--kind", "F", "--alpha", "0.5"]),
    ("dim_e_joint", &["dim", "--kind", "E_joint", "--nu-hat", "1/3", "--nu", "1", "--i", "2"]),
    ("dim_nu_level_curve", &["dim", "--kind", "nu_level", "--nu", "1", "--i", "1", "--curve", "B=2..6", "--format", "json"]),
    ("dim_hat", &["dim", "--kind", "hat", "--B", "2", "--alpha", "1/4"]),
    ("dim_spectral", &["dim", "--kind", "spectral", "--B", "3", "--alpha", "3/4"]),
    ("dim_full", &["dim", "--kind", "full", "--alpha", "1/2", "--i", "2"]),
    ("cantor_exponents", &["cantor", "--nu-hat", "1/3", "--nu", "1", "--B", "3", "--depth-k", "6", "--sample", "4", "--insert"]),
    ("cantor_runlength", &["cantor", "--alpha", "1/4", "--beta", "1/2", "--B", "2", "--depth-k", "5", "--sample", "3"]),
    ("cantor_growing", &["cantor", "--nu-hat", "1/2", "--nu", "inf", "--depth-k", "2", "--sample", "3", "--seed", "7"]),
    ("exponents", &["exponents", "--target-i", "1", "--input", "tests/data/cantor.digits", "--N", "100000"]),
    ("runlength_file", &["runlength", "--input", "tests/data/cantor.digits"]),
    ("runlength_uniform", &["runlength", "--uniform", "100000", "--seed", "3"]),
    ("verify_anchors", &["verify", "--suite", "anchors"]),
    ("verify_continuants", &["verify", "--suite", "continuants"]),
    ("verify_mc_runlength_small", &["verify", "--suite", "mc-runlength", "--samples", "4", "--n-digits", "10000"]),
];
