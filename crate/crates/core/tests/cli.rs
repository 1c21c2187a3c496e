use std::path::PathBuf;

use cowaist::cli::{run, EXIT_HYPOTHESIS, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
use serde_json::Value;

fn cli(args: &[&str]) -> cowaist::cli::CommandResult {
    run(std::iter::once("cowaist").chain(args.iter().copied()))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cowaist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn hopf_radius_two() {
    let r = cli(&["hopf", "--radius", "2"]);
    assert_eq!(r.code, EXIT_OK);
    let v = r.json().unwrap();
    assert_eq!(v["curvature_norm"], "1/8");
    assert_eq!(v["acw_lower_bound"], "8");
    let r = cli(&["hopf", "--radius", "1", "--ahat", "2"]);
    assert_eq!(r.json().unwrap()["product_pairing"], "-2");
    assert_eq!(cli(&["hopf", "--radius", "1", "--ahat", "0"]).code, EXIT_HYPOTHESIS);
    assert_eq!(cli(&["hopf", "--radius", "-1"]).code, EXIT_USAGE);
}

#[test]
fn adams_two() {
    let v = cli(&["adams", "--k", "2"]).json().unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["c"], "1");
    assert_eq!(terms[0]["display"], "(E ⊗ E)");
    assert_eq!(terms[1]["c"], "-2");
    assert_eq!(terms[1]["display"], "Λ^2(E)");
    assert_eq!(cli(&["adams", "--k", "0"]).code, EXIT_USAGE);
}

#[test]
fn bounds_of_tensor_with_wedge() {
    let f = r#"{"op":"tensor","left":{"op":"tensor","left":{"op":"id","slot":0},"right":{"op":"id","slot":0}},"right":{"op":"wedge","k":2,"arg":{"op":"id","slot":0}}}"#;
    let r = cli(&["bounds", f]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.json().unwrap(), serde_json::json!({"C": "4"}));
    let path = scratch("functor.json", &format!(r#"{{"version":"cc-functor-v1","functor":{f}}}"#));
    assert_eq!(cli(&["bounds", path.to_str().unwrap()]).json().unwrap()["C"], "4");
    assert_eq!(cli(&["bounds", r#"{"op":"wedge","k":2}"#]).code, EXIT_USAGE);
}

#[test]
fn decompose_examples() {
    let r = cli(&["decompose", "--partition", "1,1", "--N", "2"]);
    assert_eq!(r.code, EXIT_OK);
    let v = r.json().unwrap();
    assert_eq!(v["version"], "cc-cert-v1");
    assert_eq!(v["terms"].as_array().unwrap().len(), 6);

    let v = cli(&["decompose", "--partition", "1", "--N", "4"]).json().unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["lambda"], "1");
    assert_eq!(terms[0]["functor"], serde_json::json!({"op": "id", "slot": 0}));

    let r = cli(&["decompose", "--partition", "3,2", "--N", "4"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stdout.is_empty());
    assert_eq!(cli(&["decompose", "--partition", "1,x", "--N", "4"]).code, EXIT_USAGE);
}

#[test]
fn verify_fresh_and_tampered() {
    let cert = cli(&["decompose", "--partition", "2", "--N", "4"]).stdout;
    let path = scratch("c2.json", &cert);
    let r = cli(&["verify", path.to_str().unwrap(), "--ranks", "1,2,3,4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);

    let mut doc: Value = serde_json::from_str(&cert).unwrap();
    doc["terms"][0]["lambda"] = Value::String("7/3".into());
    let bad = scratch("c2-bad.json", &doc.to_string());
    let r = cli(&["verify", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_VERIFICATION);
    let v = r.json().unwrap();
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
    assert!(v["failures"][0]["residual"].is_object());

    let junk = scratch("junk.json", "{\"version\":\"cc-cert-v1\"");
    assert_eq!(cli(&["verify", junk.to_str().unwrap()]).code, EXIT_USAGE);
    assert_eq!(cli(&["verify", "/nonexistent/cert.json"]).code, EXIT_USAGE);
}

#[test]
fn pipeline_toy_and_zero_table() {
    let p = scratch("p1.json", r#"{"version":"cc-pairing-v1","n":1,"table":{"x1":"1"}}"#);
    let args = ["pipeline", "--roots", "x1", "--pairing", p.to_str().unwrap(), "--witness", "1", "--m0", "1"];
    let r = cli(&args);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v = r.json().unwrap();
    // c = 1/(max C_k · A_1) with C_1 = 1, C_2 = 2, A_1 = 1
    assert_eq!(v["c"], "1/2");
    assert_eq!(v["A_N"], "1");
    assert_eq!(v["k0"], 1);
    assert_eq!(v["bound"], "2");
    assert_eq!(cli(&args).stdout, r.stdout);

    let z = scratch("p0.json", r#"{"version":"cc-pairing-v1","n":1,"table":{}}"#);
    let r = cli(&["pipeline", "--roots", "x1", "--pairing", z.to_str().unwrap(), "--witness", "1", "--m0", "1"]);
    assert_eq!(r.code, EXIT_HYPOTHESIS);
    assert!(r.stdout.is_empty());
    let r = cli(&["pipeline", "--roots", "x1", "--pairing", p.to_str().unwrap(), "--witness", "1", "--m0", "-1"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn selftest_and_usage() {
    let r = cli(&["selftest"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(r.json().unwrap()["passed"], true);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
}
