use std::process::{Command, Output};

use orbitquant::{ExpPoly, VarSet};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitquant")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_point() {
    let o = run(&["orbit", "classify", "--algebra", "affR", "--point", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("affR_upper"));
    let (v, code) = json(&["--json", "orbit", "classify", "--algebra", "sl2R", "--point", "6,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["family"], "sl2_hyperboloid");
    assert_eq!(v["result"]["lambda"], "3");
}

#[test]
fn star_example_and_round_trip() {
    let o = run(&["star", "--algebra", "affR", "--orbit", "upper", "--f", "p", "--g", "exp(q)", "--order", "6", "--h", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "p*exp(q) + (-1/2 i)*exp(q)");

    let (v, code) = json(&["--json", "--h", "1/2", "star", "--algebra", "affR", "--orbit", "upper", "--f", "p^2*exp(q)", "--g", "q*p + exp(-q)"]);
    assert_eq!(code, 0);
    let vars = VarSet::new(&["p", "q"]).unwrap();
    for key in ["f", "g", "value"] {
        let s = v["result"][key].as_str().unwrap();
        let parsed = ExpPoly::parse(&vars, s).unwrap();
        assert_eq!(parsed.to_expr_string(), s, "{key} does not round-trip");
    }
    assert_eq!(v["result"]["h"], "1/2");
    assert_eq!(v["result"]["exact"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--scope", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "classify", "--algebra", "affR", "--point", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "classify", "--algebra", "suN", "--point", "1"]).status.code(), Some(2));
    assert_eq!(run(&["--h", "0", "star", "--algebra", "affR", "--orbit", "upper", "--f", "p", "--g", "q"]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--algebra", "sl2R", "--A", "1,0,0"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--algebra", "sl2R", "--orbit", "hyperboloid"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_reports_derived_overrides() {
    let (v, code) = json(&["--json", "verify", "--scope", "printed"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert!(v["conventions"]["fourier_kernel"].is_string());
    let cases = v["suites"][0]["cases"].as_array().unwrap();
    let overrides: Vec<&str> =
        cases.iter().filter(|c| c["status"] == "derived_override").map(|c| c["id"].as_str().unwrap()).collect();
    assert!(overrides.contains(&"affR_upper/Y"));
    assert!(cases.iter().all(|c| c["status"] != "fail"));

    let (v, code) = json(&["--json", "verify", "--scope", "expm"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = v["suites"][0]["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"affR/printed_L"));
}

#[test]
fn verify_affr_scope_passes() {
    let (v, code) = json(&["--json", "--jobs", "1", "verify", "--scope", "affR"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["order"], 6);
    let suites: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert!(suites.contains(&"evolution") && suites.contains(&"commutator"));
}

#[test]
fn evolve_report() {
    let (v, code) = json(&["evolve", "--algebra", "affR", "--A", "0,1", "--t", "1.0", "--grid", "1024", "--report", "json"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert!(r["rel_l2_error"].as_f64().unwrap() <= 1e-3);
    assert_eq!(r["pass"], true);
    assert_eq!(r["grid"], 1024);
}

#[test]
fn homology_reports() {
    let (v, code) = json(&["--json", "homology", "--algebra", "sl2R", "--orbit", "hyperboloid", "--lambda", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["chern_verdict"], "iso");
    assert_eq!(v["result"]["published_k"]["degree1"]["rank"], 1);
    assert_eq!(v["result"]["lambda_quantized"], true);

    let (v, _) = json(&["--json", "homology", "--catalogue"]);
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    let flagged: Vec<&str> =
        rows.iter().filter(|r| r["chain_matches_published"] == false).map(|r| r["orbit"]["family"].as_str().unwrap()).collect();
    assert_eq!(flagged, ["affC_punctured"]);

    let (v, _) = json(&["--json", "homology", "--algebra", "sl2R", "--orbit", "twofold_lower", "--lambda", "1/3"]);
    assert_eq!(v["result"]["lambda_quantized"], false);
}

#[test]
fn darboux_branches() {
    for k in ["-1", "0", "1"] {
        let o = run(&["orbit", "darboux", "--algebra", "affC", "--orbit", "punctured", "--branch", k]);
        assert_eq!(o.status.code(), Some(0), "branch {k}");
        assert!(stdout(&o).trim_end().ends_with("PASS"));
    }
}
