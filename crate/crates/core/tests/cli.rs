//! End-to-end runs of the command line over the shipped fixture files.

use std::path::{Path, PathBuf};

use cohcfg::cli::run_strs;
use cohcfg::closure::{wl_closure, InitialColoring};
use cohcfg::construct::wreath;
use cohcfg::fileio::{parse_scheme, read_scheme, write_scheme};
use proptest::prelude::*;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_strs(args, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_fix(args: &[&str]) -> (i32, Value, String) {
    let (code, out, err) = run(args);
    let value = serde_json::from_str(&out).unwrap_or(Value::Null);
    (code, value, err)
}

#[test]
fn shipped_fixtures_roundtrip_byte_for_byte() {
    for name in ["k2", "k3", "k4", "z2", "z3", "q2", "q3", "c5"] {
        let path = fixture(&format!("{name}.scm"));
        let raw = std::fs::read_to_string(&path).unwrap();
        let (_, config) = parse_scheme(&raw).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(write_scheme(&config), raw, "{name} is not in canonical form");
    }
}

#[test]
fn wreath_fixtures_match_their_construction() {
    for (factor, shipped) in [("z2.scm", "q2.scm"), ("z3.scm", "q3.scm")] {
        let (_, k2) = read_scheme(&fixture("k2.scm")).unwrap();
        let (_, t) = read_scheme(&fixture(factor)).unwrap();
        let (built, _) = wreath(&k2, &t).unwrap();
        let (_, on_disk) = read_scheme(&fixture(shipped)).unwrap();
        assert_eq!(built.colors(), on_disk.colors(), "{shipped}");
    }
}

#[test]
fn validate_rejects_the_broken_fixture_with_a_witness() {
    let path = fixture("broken.scm");
    let (code, out, err) = run(&["cohcfg", "validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("axiom violation"), "{err}");
}

#[test]
fn verify_on_the_smallest_pair_reports_three_exact_families() {
    let k2 = fixture("k2.scm");
    let k3 = fixture("k3.scm");
    let (code, v, err) = run_fix(&[
        "cohcfg",
        "verify",
        k2.to_str().unwrap(),
        k3.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["caseTag"], "Case1");
    assert_eq!(v["centerDimension"], 3);
    assert_eq!(v["family"].as_array().unwrap().len(), 3);
    assert!(v["family"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["exact"] == Value::Bool(true)));
    for digest in ["xDigest", "yDigest"] {
        let d = v["inputs"][digest].as_str().unwrap();
        assert_eq!(d.len(), 64);
        assert!(d.chars().all(|c| c.is_ascii_hexdigit()));
    }
}

#[test]
fn analyze_classifies_the_quasi_thin_fixture_as_split() {
    let q2 = fixture("q2.scm");
    let (code, v, err) = run_fix(&["cohcfg", "analyze", q2.to_str().unwrap(), "--y0", "0"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["caseTag"], "Case2");
    assert_eq!(v["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn terwilliger_subcommand_certifies_the_extension_match() {
    let q3 = fixture("q3.scm");
    let (code, v, err) = run_fix(&["cohcfg", "terwilliger", q3.to_str().unwrap(), "--x0", "0"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(v["coincide"], Value::Bool(true));
    assert_eq!(v["terwilligerDimension"], v["extensionRank"]);
}

#[test]
fn closure_subcommand_writes_the_extension() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = fixture("k3.scm");
    let out = dir.path().join("ext.scm");
    let (code, _, err) = run(&[
        "cohcfg",
        "closure",
        k3.to_str().unwrap(),
        "--point",
        "0",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let (_, ext) = read_scheme(&out).unwrap();
    assert_eq!(ext.order(), 3);
    assert_eq!(ext.rank(), 5);
}

fn scrub_runtime(report: &str) -> String {
    let key = "\"runtimeMs\": ";
    let Some(start) = report.find(key) else {
        return report.to_string();
    };
    let digits_from = start + key.len();
    let digits_len = report[digits_from..]
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(0);
    let mut s = String::with_capacity(report.len());
    s.push_str(&report[..digits_from]);
    s.push('0');
    s.push_str(&report[digits_from + digits_len..]);
    s
}

#[test]
fn verify_reports_are_byte_stable_across_runs() {
    let k2 = fixture("k2.scm");
    let q2 = fixture("q2.scm");
    let args = [
        "cohcfg",
        "verify",
        k2.to_str().unwrap(),
        q2.to_str().unwrap(),
    ];
    let (code_a, out_a, _) = run(&args);
    let (code_b, out_b, _) = run(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(scrub_runtime(&out_a), scrub_runtime(&out_b));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Whatever the closure produces, its file form reads back identically.
    #[test]
    fn closure_output_survives_the_file_format(
        n in 1usize..=8,
        seed in proptest::collection::vec(0u32..4, 64),
    ) {
        let colors = (0..n * n).map(|i| seed[i % seed.len()]).collect();
        let init = InitialColoring::new(n, colors).unwrap();
        let config = wl_closure(&init).unwrap();
        let (_, parsed) = parse_scheme(&write_scheme(&config)).unwrap();
        prop_assert_eq!(parsed.colors(), config.colors());
    }
}
