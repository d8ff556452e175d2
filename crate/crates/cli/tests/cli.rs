//! End-to-end tests against the built binary: exit codes, output schemas,
//! determinism, and input/output closure.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use dnfree::dalg::DiagonalScalar;
use dnfree::json::{joint_to_doc, parse_distribution, to_json_string};
use dnfree::stardist::joint_from_free_pair;
use dnfree::transforms::Distribution;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dnfree"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|err| {
        panic!(
            "stdout is not one JSON document: {}\n{}",
            err,
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn stderr_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stderr).unwrap_or_else(|err| {
        panic!(
            "stderr is not one JSON document: {}\n{}",
            err,
            String::from_utf8_lossy(&output.stderr)
        )
    })
}

fn write_fixture(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).expect("fixture written");
    path
}

const SEMI_JSON: &str =
    r#"{"N":1,"order":6,"components":[{"model":{"semicircular":{"variance":"1"}}}]}"#;
const FP_JSON: &str =
    r#"{"N":1,"order":6,"components":[{"model":{"free_poisson":{"rate":"1"}}}]}"#;

#[test]
fn nc_reports_catalan_count_and_table_rows() {
    let output = run(&["nc", "--n", "4", "--table"]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["payload"]["count"], 14);
    assert_eq!(doc["payload"]["table"].as_array().unwrap().len(), 14);
    // the all-singletons row carries mu(0_4, 1_4) = -5
    let bottom = doc["payload"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .find(|row| row["partition"] == "{{1},{2},{3},{4}}")
        .expect("bottom row present");
    assert_eq!(bottom["kreweras"], "{{1,2,3,4}}");
    assert_eq!(bottom["mobius"], "-5");
}

#[test]
fn nc_out_of_bounds_exits_3_with_error_json() {
    let output = run(&["nc", "--n", "0"]);
    assert_eq!(output.status.code(), Some(3));
    let err = stderr_json(&output);
    assert_eq!(err["error"]["class"], "bounds");
    assert!(output.stdout.is_empty());

    let output = run(&["nc", "--n", "13"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = run(&["nc", "--n", "5", "--table"]);
    let b = run(&["nc", "--n", "5", "--table"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn transform_m2k_on_semicircular_model() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "semi.json", SEMI_JSON);
    let output = run(&["transform", "--in", input.to_str().unwrap(), "--direction", "m2k"]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(
        doc["payload"]["cumulants"]["components"][0]["cumulants"],
        serde_json::json!(["0", "1", "0", "0", "0", "0"])
    );
}

#[test]
fn transform_roundtrips_through_k2m() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "fp.json", FP_JSON);
    let m2k = run(&["transform", "--in", input.to_str().unwrap(), "--direction", "m2k"]);
    assert!(m2k.status.success());
    let doc = stdout_json(&m2k);
    let cumulants = to_json_string(&doc["payload"]["cumulants"]);
    let back_in = write_fixture(&dir, "k.json", &cumulants);
    let k2m = run(&["transform", "--in", back_in.to_str().unwrap(), "--direction", "k2m"]);
    assert!(k2m.status.success());
    let round = stdout_json(&k2m);
    let emitted = to_json_string(&round["payload"]["distribution"]);
    let reparsed = parse_distribution(&emitted).unwrap();
    let original = parse_distribution(FP_JSON).unwrap();
    assert_eq!(reparsed, original);
}

#[test]
fn malformed_json_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "broken.json", "{\"N\": 1,");
    let output = run(&["transform", "--in", input.to_str().unwrap(), "--direction", "m2k"]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_json(&output);
    assert_eq!(err["error"]["class"], "parse");
}

#[test]
fn missing_file_exits_1() {
    let output = run(&["transform", "--in", "/nonexistent/x.json", "--direction", "m2k"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn convolve_add_doubles_the_semicircular_variance() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "semi.json", SEMI_JSON);
    let path = input.to_str().unwrap();
    let output = run(&[
        "convolve", "--op", "add", "--in", path, "--in", path, "--order", "4",
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(
        doc["payload"]["distribution"]["components"][0]["moments"],
        serde_json::json!(["0", "2", "0", "8"])
    );
}

#[test]
fn convolve_mult_all_reports_agreement_and_closure() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "fp.json", FP_JSON);
    let path = input.to_str().unwrap();
    let output = run(&[
        "convolve", "--op", "mult", "--method", "all", "--in", path, "--in", path, "--order", "5",
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["payload"]["agreement"], true);
    // free Poisson squared freely: Fuss-Catalan moments
    assert_eq!(
        doc["payload"]["distribution"]["components"][0]["moments"],
        serde_json::json!(["1", "3", "12", "55", "273"])
    );
    // emitted distribution re-parses
    let emitted = to_json_string(&doc["payload"]["distribution"]);
    assert!(parse_distribution(&emitted).is_ok());
}

#[test]
fn convolve_order_beyond_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "semi.json", SEMI_JSON);
    let path = input.to_str().unwrap();
    let output = run(&[
        "convolve", "--op", "add", "--in", path, "--in", path, "--order", "9",
    ]);
    assert_eq!(output.status.code(), Some(3));
    let err = stderr_json(&output);
    assert_eq!(err["error"]["class"], "bounds");
}

#[test]
fn convolve_needs_exactly_two_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "semi.json", SEMI_JSON);
    let output = run(&[
        "convolve", "--op", "add", "--in", input.to_str().unwrap(), "--order", "3",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn stransform_rejects_zero_mean_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "semi.json", SEMI_JSON);
    let output = run(&["stransform", "--in", input.to_str().unwrap(), "--order", "6"]);
    assert_eq!(output.status.code(), Some(2));
    let err = stderr_json(&output);
    assert_eq!(err["error"]["class"], "domain");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("not invertible"));
}

#[test]
fn stransform_of_free_poisson_truncates_the_reciprocal() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "fp.json", FP_JSON);
    let output = run(&["stransform", "--in", input.to_str().unwrap(), "--order", "6"]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    let coeffs = &doc["payload"]["series"]["coeffs"];
    assert_eq!(coeffs["0"], serde_json::json!(["1"]));
    assert_eq!(coeffs["1"], serde_json::json!(["-1"]));
    assert_eq!(coeffs["5"], serde_json::json!(["-1"]));
}

#[test]
fn classify_semicircular_and_even() {
    let dir = tempfile::tempdir().unwrap();
    let semi = write_fixture(&dir, "semi.json", SEMI_JSON);
    let output = run(&[
        "classify", "--in", semi.to_str().unwrap(), "--kind", "semicircular", "--order", "6",
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["payload"]["result"], "holds");

    let fp = write_fixture(&dir, "fp.json", FP_JSON);
    let output = run(&[
        "classify", "--in", fp.to_str().unwrap(), "--kind", "even", "--order", "6",
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["payload"]["result"], "fails");
}

#[test]
fn classify_free_finds_witness_on_dependent_pair() {
    let dir = tempfile::tempdir().unwrap();
    // a genuinely free pair first
    let x = Distribution::semicircular(&DiagonalScalar::one(1), 4).unwrap();
    let y = Distribution::free_poisson(&DiagonalScalar::one(1), 4).unwrap();
    let joint = joint_from_free_pair(&x, &y, 4).unwrap();
    let names = vec!["x".to_string(), "y".to_string()];
    let free_path = write_fixture(
        &dir,
        "free.json",
        &to_json_string(&joint_to_doc(&joint, &names)),
    );
    let output = run(&[
        "classify", "--in", free_path.to_str().unwrap(), "--kind", "free", "--order", "4",
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["payload"]["result"], "holds");

    // the same variable in both slots: k(x y) = k_2 != 0
    let mut doc_value: Value =
        serde_json::from_str(&to_json_string(&joint_to_doc(&joint, &names))).unwrap();
    doc_value["moments"]["x y"] = serde_json::json!(["1"]);
    let dep_path = write_fixture(&dir, "dep.json", &to_json_string(&doc_value));
    let output = run(&[
        "classify", "--in", dep_path.to_str().unwrap(), "--kind", "free", "--order", "4",
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["payload"]["result"], "fails");
    assert_eq!(doc["payload"]["witness"]["word"], "x y");
}

#[test]
fn classify_free_requires_a_joint_table() {
    let dir = tempfile::tempdir().unwrap();
    let semi = write_fixture(&dir, "semi.json", SEMI_JSON);
    let output = run(&[
        "classify", "--in", semi.to_str().unwrap(), "--kind", "free", "--order", "4",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn divide_by_zero_parts_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "fp.json", FP_JSON);
    let output = run(&["divide", "--in", input.to_str().unwrap(), "--n", "0"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn divide_emits_scaled_cumulants() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(&dir, "semi.json", SEMI_JSON);
    let output = run(&["divide", "--in", input.to_str().unwrap(), "--n", "4"]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    // semicircular(1)/4 = semicircular(1/4): m_2 = 1/4, m_4 = 2/16 = 1/8
    assert_eq!(
        doc["payload"]["distribution"]["components"][0]["moments"],
        serde_json::json!(["0", "1/4", "0", "1/8", "0", "5/64"])
    );
}

#[test]
fn unknown_flags_are_rejected() {
    let output = run(&["nc", "--n", "3", "--bogus"]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_json(&output);
    assert_eq!(err["error"]["class"], "parse");
}

#[test]
fn selfcheck_passes_and_reports_counts() {
    let output = run(&["selfcheck", "--order", "3"]);
    assert!(
        output.status.success(),
        "selfcheck failed: {}",
        String::from_utf8_lossy(&output.stdout)
    );
    let doc = stdout_json(&output);
    assert_eq!(doc["payload"]["failed"], 0);
    let checks = doc["payload"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    assert!(checks.iter().all(|c| c["passed"] == true));
}
