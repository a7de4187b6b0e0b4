use std::process::Command;

use nowicki::cli::run;
use serde_json::Value;

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nowicki")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (code, out) = bin(&all);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

fn total_dim(v: &Value) -> u64 {
    v["results"].as_array().unwrap().iter().map(|c| c["dimension"].as_u64().unwrap()).sum()
}

#[test]
fn kernel_dimensions() {
    assert_eq!(total_dim(&json(&["kernel", "--algebra", "comm", "--d", "2", "--degree", "2"])), 4);
    assert_eq!(total_dim(&json(&["kernel", "--algebra", "grass", "--d", "1", "--degree", "4"])), 2);
    assert_eq!(total_dim(&json(&["kernel", "--algebra", "meta", "--d", "2", "--degree", "2"])), 8);
}

#[test]
fn kernel_elements_parse_back_as_constants() {
    let v = json(&["kernel", "--algebra", "meta", "--d", "2", "--degree", "3"]);
    assert_eq!(v["command"], "kernel");
    assert_eq!(v["config"]["degree"], 3);
    for c in v["results"].as_array().unwrap() {
        for e in c["elements"].as_array().unwrap() {
            let doc = serde_json::from_value(e.clone()).unwrap();
            match nowicki::exprio::from_json_value(&doc).unwrap() {
                nowicki::exprio::AnyElement::Meta(f) => assert!(nowicki::metabelian::meta_derive(&f).is_zero()),
                other => panic!("unexpected {other:?}"),
            }
        }
    }
}

#[test]
fn straighten_text() {
    let (code, out) = bin(&["straighten", "--d", "4", "alpha(1,3)*alpha(2,4)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "alpha(1,2)*alpha(3,4) + alpha(1,4)*alpha(2,3)");
}

#[test]
fn exit_codes() {
    assert_eq!(run(["nowicki", "--help"]), 0);
    assert_eq!(run(["nowicki", "--version"]), 0);
    assert_eq!(run(["nowicki", "kernel", "--algebra", "bogus", "--degree", "1"]), 2);
    assert_eq!(run(["nowicki", "frobnicate"]), 2);
    assert_eq!(run(["nowicki", "kernel", "--algebra", "comm", "--d", "0", "--degree", "1"]), 2);
    // out of range generator index is an input error
    assert_eq!(run(["nowicki", "straighten", "--d", "2", "alpha(1,3)"]), 2);
    assert_eq!(run(["nowicki", "normalize", "--algebra", "meta", "--d", "2", "[x1,"]), 2);
    assert_eq!(run(["nowicki", "span", "--algebra", "uv", "--max-degree", "2"]), 2);
}

#[test]
fn failing_checks_exit_one() {
    let (code, out) = bin(&["span", "--algebra", "grass", "--d", "2", "--max-degree", "4"]);
    assert_eq!(code, 1);
    assert!(out.contains("54 components, 2 with kernel != span"), "{out}");
    let (code, _) = bin(&["span", "--algebra", "grass", "--d", "2", "--max-degree", "4", "--z-range", "relaxed"]);
    assert_eq!(code, 0);
    let (code, _) = bin(&["span", "--algebra", "meta", "--d", "2", "--max-degree", "4"]);
    assert_eq!(code, 1);
    let (code, _) = bin(&["span", "--algebra", "comm", "--d", "3", "--max-degree", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn verify_subcommands() {
    for args in [
        &["verify", "relations", "--d", "3"][..],
        &["verify", "generators", "--algebra", "meta", "--d", "2"],
        &["verify", "generators", "--algebra", "grass", "--d", "2"],
        &["verify", "generators", "--algebra", "wreath", "--d", "2"],
        &["verify", "embedding", "--d", "2", "--degree", "3", "--pairs", "20"],
        &["verify", "identities", "--cases", "20"],
        &["verify", "round-trips", "--cases", "20"],
        &["verify", "canonical", "--d", "2", "--degree", "3"],
    ] {
        let (code, _) = bin(args);
        assert_eq!(code, 0, "{args:?}");
    }
    let (code, out) = bin(&["verify", "evaluations", "--d", "2", "--degree", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL] 9"));
}

#[test]
fn json_envelope_is_deterministic() {
    let args = ["--format", "json", "verify", "identities", "--cases", "30", "--seed", "5"];
    let (c1, a) = bin(&args);
    let (c2, b) = bin(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["command"], "verify identities");
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["results"][0]["passed"], true);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("nowicki-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out) = bin(&["straighten", "--d", "2", "u(2)*v(1)*gamma(1,2)", "--format", "json", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["results"][0]["terms"].as_array().unwrap().len(), 3);
}
