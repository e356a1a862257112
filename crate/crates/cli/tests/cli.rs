use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn tnfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnfactor")).args(args).output().unwrap()
}

fn tnfactor_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tnfactor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn gen_s_matrix() {
    let out = tnfactor(&["gen", "--family", "S", "--x", "1,2", "--y", "1,2"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with('\n'));
    let v = json(&out);
    assert_eq!(v["kind"], "exact");
    assert_eq!(v["data"], serde_json::json!([["2", "3"], ["3", "5"]]));
}

#[test]
fn factor_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let target = dir.path().join("target.json");
    let cert_s = cert.to_str().unwrap();
    let target_s = target.to_str().unwrap();

    let out = tnfactor(&["factor", "--theorem", "2.2", "--x", "1,2", "--y", "1,2", "--output", cert_s]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&cert).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let factors = v["factors"].as_array().unwrap();
    assert!(factors.iter().any(|f| f["s"] == "3/2"));
    assert!(factors.iter().any(|f| f["d"] == serde_json::json!(["2", "1/2"])));

    let out = tnfactor(&["gen", "--family", "S", "--x", "1,2", "--y", "1,2", "--output", target_s]);
    assert!(out.status.success());
    let out = tnfactor(&["verify", "--cert", cert_s, "--target", target_s]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("exact-equal"));

    let tampered = text.replacen("\"3/2\"", "\"5/2\"", 1);
    fs::write(&cert, tampered).unwrap();
    let out = tnfactor(&["verify", "--cert", cert_s, "--target", target_s]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["result"], "mismatch");
    assert!(v["row"].as_u64().is_some() && v["col"].as_u64().is_some());
}

#[test]
fn verify_regenerates_target_and_reads_stdin() {
    for args in [
        vec!["factor", "--theorem", "hadamard", "--x", "1,2,3", "--y", "1/2,2,5", "--m", "2"],
        vec!["factor", "--theorem", "vandermonde", "--x", "3,-1,2"],
        vec!["factor", "--theorem", "min", "--x", "1,2,3"],
    ] {
        let cert = tnfactor(&args);
        assert!(cert.status.success(), "{args:?}");
        let out = tnfactor_stdin(&["verify", "--cert", "-"], &stdout(&cert));
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&out)["result"], "exact-equal");
    }
    let cert = tnfactor(&["factor", "--theorem", "lu", "--x", "1,2,4"]);
    let out = tnfactor_stdin(&["verify", "--cert", "-"], &stdout(&cert));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"], "float-equal");
}

#[test]
fn neville_breakdown_and_success() {
    let bad = r#"{"kind":"exact","rows":2,"cols":2,"data":[["0","1"],["1","0"]]}"#;
    let out = tnfactor_stdin(&["factor", "--theorem", "neville", "--input", "-"], bad);
    assert!(out.status.success());
    assert_eq!(json(&out)["outcome"], "breakdown");
    let good = r#"{"kind":"exact","rows":2,"cols":2,"data":[["2","3"],["3","5"]]}"#;
    let out = tnfactor_stdin(&["factor", "--theorem", "neville", "--input", "-"], good);
    assert_eq!(json(&out)["outcome"], "factored");
}

#[test]
fn check_reports_witness() {
    let m = r#"{"kind":"exact","rows":2,"cols":2,"data":[["1","2"],["3","1"]]}"#;
    let out = tnfactor_stdin(&["check", "--prop", "tn", "-k", "2", "--input", "-"], m);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "FAILS");
    assert_eq!(v["witness"]["value"], "-5");
    assert_eq!(v["witness"]["rows"], serde_json::json!([1, 2]));

    let s = tnfactor(&["gen", "--family", "S-pow", "--x", "1,2,3", "--r", "0.5"]);
    let out = tnfactor_stdin(&["check", "--prop", "tn", "--mode", "float", "--input", "-"], &stdout(&s));
    assert_eq!(json(&out)["verdict"], "FAILS");
}

#[test]
fn scan_rank_and_selftest() {
    let out = tnfactor(&["scan", "--family", "S", "--x", "1,2,3", "--r-list", "1.5,0.5,1"]);
    let v = json(&out);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 3);
    assert!(samples.iter().all(|s| s["agrees"] == true));
    assert_eq!(samples[0]["exponent"], 0.5);

    let out = tnfactor(&["rank", "--x", "1,2,3,4,5", "--m", "3"]);
    assert_eq!(json(&out)["rank"], 4);

    let out = tnfactor(&["selftest", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["gen", "--family", "S", "--x", "1,1.5"],
        vec!["gen", "--family", "S", "--x", "2,1"],
        vec!["factor", "--theorem", "2.4", "--x", "1,2,3", "--m", "3"],
        vec!["factor", "--theorem", "2.2", "--x", "1"],
        vec!["rank", "--x", "1,2,3", "--m", "2"],
        vec!["gen", "--family", "mean", "--x", "1,2", "--mean", "heinz-reciprocal", "--nu", "0.3"],
        vec!["frobnicate"],
    ] {
        let out = tnfactor(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["factor", "--theorem", "2.2", "--x", "1,3/2,4,7", "--y", "1/3,2,5,6"];
    let a = tnfactor(&args);
    let b = tnfactor(&args);
    assert_eq!(a.stdout, b.stdout);

    let gen = tnfactor(&["gen", "--family", "mean", "--x", "1,2,3", "--mean", "harmonic", "--r", "2"]);
    let m = stdout(&gen);
    let check = tnfactor_stdin(&["check", "--prop", "tp", "--input", "-"], &m);
    assert_eq!(json(&check)["verdict"], "HOLDS");
    let neville = tnfactor_stdin(&["factor", "--theorem", "neville", "--input", "-"], &m);
    let cert = json(&neville)["certificate"].to_string();
    let out = tnfactor_stdin(&["verify", "--cert", "-"], &cert);
    assert_eq!(json(&out)["result"], "exact-equal");
}
