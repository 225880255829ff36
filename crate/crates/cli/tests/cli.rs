use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn bsdkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsdkit")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("bsdkit-cli-{}-{name}", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn tamagawa_of_a_cycle() {
    let out = json(&bsdkit(&["tamagawa", &fixture("cycle_of_5.json")]));
    assert_eq!(out["c_p"], 5);
    assert_eq!(out["invariant_factors"], serde_json::json!([5]));
}

#[test]
fn vanishing_order_modes_and_truncation() {
    let model = fixture("multiplicity_two.json");
    for mode in ["direct", "modified"] {
        let out = json(&bsdkit(&["vanishing-order", &model, "--component", "G", "--function", "x + y", "--mode", mode]));
        assert_eq!(out, serde_json::json!({ "order": 1, "exact": true }));
    }
    let out = json(&bsdkit(&["vanishing-order", &model, "--component", "G", "--function", "2", "--truncate", "1"]));
    assert_eq!(out, serde_json::json!({ "order": 1, "exact": false }));
}

#[test]
fn groebner_basis_command() {
    let out = json(&bsdkit(&["gb", "--ring", "ZZ[x,y]", "x^2 - 1", "2*x + 2"]));
    assert_eq!(out["ring"], "ZZ[x,y]");
    assert!(out["size"].as_u64().unwrap() >= 1);
    assert_eq!(out["basis"].as_array().unwrap().len() as u64, out["size"].as_u64().unwrap());
}

#[test]
fn math_errors_exit_3() {
    let out = bsdkit(&["tamagawa", &fixture("asymmetric_matrix.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not symmetric"));
    // J itself vanishes identically on the patch
    let out = bsdkit(&["vanishing-order", &fixture("multiplicity_two.json"), "--component", "G", "--function", "y^2 - x^2 + 2*x + 2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn input_errors_exit_2() {
    let out = bsdkit(&["tamagawa", &temp_file("broken.json", "{ not json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let out = bsdkit(&["tamagawa", &temp_file("extra.json", r#"{"p": 2, "colour": "red"}"#)]);
    assert_eq!(out.status.code(), Some(2));

    let out = bsdkit(&["tamagawa", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = bsdkit(&["vanishing-order", &fixture("multiplicity_two.json"), "--component", "G", "--function", "w + 1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn period_needs_charts() {
    let text = std::fs::read_to_string(fixture("genus2_neron_ready_p3.json")).unwrap();
    let mut model: Value = serde_json::from_str(&text).unwrap();
    model["charts"] = serde_json::json!([]);
    let path = temp_file("no-charts.json", &model.to_string());
    let out = bsdkit(&["period", &path, "--matrix-file", &fixture("period_matrix.json")]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn extend_field_small() {
    let out = json(&bsdkit(&["extend-field", "--ell", "2", "--p", "3", "--seed", "1"]));
    assert_eq!(out["degree"], 2);
    assert_eq!(out["subfield_property"], true);
}
