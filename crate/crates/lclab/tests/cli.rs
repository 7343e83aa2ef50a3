use std::process::{Command, Output};

use lclab::formats;
use lclab_core::asymptotics::{extrema, limit_function};
use lclab_core::automaton::AutomatonSpec;
use lclab_core::complexity::{line_complexity, ScanPolicy};
use lclab_core::genfun::build_framework;
use lclab_core::recursion::verify_theorem_main;
use lclab_core::structure::suspicion;
use lclab_core::{GfpPoly, PrimeModulus};
use serde_json::Value;

fn lclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lclab")).args(args).env_remove("LCLAB_THREADS").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = lclab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn simulate_draws_pascal() {
    assert_eq!(ok(&["simulate", "--p", "2", "--rule", "11", "--rows", "4", "--format", "text"]), "1\n11\n101\n1111\n");
    let pbm = ok(&["simulate", "--rule", "11", "--rows", "3", "--format", "pbm"]);
    assert_eq!(pbm, "P1\n4 3\n1 0 0 0\n1 1 0 0\n1 0 1 0\n");
    let padded = ok(&["simulate", "--rule", "101011", "--rows", "2", "--pad", "zero"]);
    assert_eq!(padded, "10000000000\n10101100000\n");
}

#[test]
fn suspicious_reports_the_common_factor() {
    let v = json(&["suspicious", "--rule", "11011"]);
    assert_eq!(v["verdict"], "suspicious");
    assert_eq!(v["gcd"], "1+x");
    let rule = GfpPoly::parse(PrimeModulus::TWO, "11011").unwrap();
    assert_eq!(formats::suspicion_from_json(&v).unwrap(), suspicion(&rule).unwrap());
}

#[test]
fn json_outputs_parse_back_exactly() {
    let spec = AutomatonSpec::parse(2, "1101", "1").unwrap();
    let seq = line_complexity(&spec, 200, &ScanPolicy::default());
    let rec = verify_theorem_main(&seq, 3).unwrap().spec().unwrap().clone();
    let fw = build_framework(&seq, &rec).unwrap();
    let f = limit_function(&fw).unwrap();

    let v = json(&["recursion", "--rule", "1101", "--kmax", "200"]);
    assert_eq!(formats::recursion_from_json(&v).unwrap(), rec);
    let v = json(&["genfun", "--rule", "1101", "--kmax", "200"]);
    assert_eq!(formats::framework_from_json(&v).unwrap(), fw);
    let v = json(&["limit", "--rule", "1101", "--kmax", "200"]);
    assert_eq!(formats::piecewise_from_json(&v["function"]).unwrap(), f);
    assert_eq!(formats::extrema_from_json(&v["extrema"]).unwrap(), extrema(&f));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["converge", "--rule", "1101", "--ymin", "32", "--ymax", "200", "--samples", "40", "--format", "json"];
    assert_eq!(ok(&args), ok(&args));
    let args = ["intersections", "--rule", "11001", "--kmax", "12"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn tables_have_their_headers() {
    let csv = ok(&["complexity", "--rule", "11", "--kmax", "4"]);
    assert_eq!(csv, "k,a_k,exact\n0,1,true\n1,2,true\n2,4,true\n3,8,true\n4,14,true\n");
    let csv = ok(&["converge", "--rule", "1101", "--ymin", "32", "--ymax", "64", "--samples", "7"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(formats::CONVERGENCE_HEADER));
    assert_eq!(lines.count(), 7);
    let csv = ok(&["intersections", "--rule", "1101", "--kmax", "30"]);
    let last = csv.lines().last().unwrap();
    assert!(csv.starts_with(formats::INTERSECTION_HEADER));
    assert!(last.starts_with("30,") && last.ends_with(",-13"), "{last}");
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("lclab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rows.txt");
    assert_eq!(ok(&["simulate", "--rule", "11", "--rows", "2", "--out", path.to_str().unwrap()]), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "1\n11\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_statuses() {
    for args in [
        &["bogus"][..],
        &["simulate", "--rule", "1x"],
        &["simulate", "--p", "4", "--rule", "11"],
        &["complexity", "--rule", "11", "--kmax", "0"],
        &["suspicious", "--p", "3", "--rule", "12"],
        &["converge", "--rule", "1101", "--ymin", "10", "--ymax", "5"],
    ] {
        let out = lclab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_kind(&out), "usage");
    }

    let out = lclab(&["complexity", "--rule", "11", "--kmax", "6", "--row-limit", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "computation");
    assert!(String::from_utf8(out.stdout).unwrap().contains("6,"));

    let out = lclab(&["limit", "--rule", "1101", "--kmax", "12"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "computation");

    let out = Command::new(env!("CARGO_BIN_EXE_lclab"))
        .args(["simulate", "--rule", "11", "--rows", "2"])
        .env("LCLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(lclab(&["--help"]).status.code(), Some(0));
}
