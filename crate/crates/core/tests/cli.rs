//! The `painleve` binary end to end: exit codes, output formats and
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use painleve::cli::report::AnalysisReport;
use serde_json::Value;

fn painleve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_painleve")).args(args).env("NO_COLOR", "1").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{}: {}", e, stdout(o)))
}

fn temp_corpus(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("painleve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn intro_example_with_witness() {
    let o = painleve(&["analyze", "(y')^2 = y - z^2", "--witness-at", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["pp"], false);
    assert_eq!(v["poles"].as_array().unwrap().len(), 1);
    assert_eq!(v["poles"][0]["s_value"], "0");
    assert_eq!(v["poles"][0]["pole_order"], 1);
    assert_eq!(v["witness"]["base_point"], "1");
    assert_eq!(v["witness"]["leading"]["exponent"], "3/2");
    assert_eq!(v["witness"]["leading_minpoly"], "c^2 + 8/9");
    assert_eq!(v["witness"]["passes"], true);
}

#[test]
fn riccati_text_report() {
    let o = painleve(&["analyze", "y' = 1 + y^2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict:    PP"), "{}", out);
    assert!(out.contains("class:      riccati"), "{}", out);
    for line in ["  a0 = 1", "  a1 = 0", "  a2 = 1"] {
        assert!(out.lines().any(|l| l == line), "missing {:?} in\n{}", line, out);
    }
}

#[test]
fn reducible_equation_is_unsupported() {
    let o = painleve(&["analyze", "(y')^2 = y^2"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.starts_with("error[reducible]"), "{}", err);
    assert!(err.contains("(S - T) * (S + T)"), "{}", err);

    let o = painleve(&["analyze", "(y')^2 = y^2", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"]["code"], "reducible");
    assert_eq!(v["error"]["exit"], 3);
}

#[test]
fn input_errors_exit_two() {
    for bad in ["y' = ", "y'' = y", "y = z", "sin(y) = y'"] {
        let o = painleve(&["analyze", bad]);
        assert_eq!(o.status.code(), Some(2), "{:?}: {}", bad, stderr(&o));
        assert!(stderr(&o).starts_with("error["), "{}", stderr(&o));
    }
    let o = painleve(&["analyze", "y' = y", "--witness-at", "one"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["analyze", "(y')^2 = y^3 + z", "--format", "json"];
    let a = painleve(&args);
    let b = painleve(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_round_trips_and_keys_are_sorted() {
    for eq in ["(y')^2 = y - z^2", "(y')^2 = y^3 - y", "(y')^2 = y^5 - 1"] {
        let o = painleve(&["analyze", eq, "--format", "json"]);
        let text = stdout(&o);
        let r = AnalysisReport::from_json(&text).unwrap();
        assert_eq!(r.to_json(), text.trim_end());
        assert_eq!(r.schema, 1);
        assert_eq!(r.pp, r.poles.is_empty(), "{}", eq);
        let v: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}

#[test]
fn text_and_json_agree_on_the_verdict() {
    for eq in ["y' = y^2 + z", "(y')^2 = y - z^2", "(y')^3 = y^2"] {
        let t = stdout(&painleve(&["analyze", eq]));
        let v = json(&painleve(&["analyze", eq, "--format", "json"]));
        let label = if v["pp"] == true { "verdict:    PP" } else { "verdict:    not PP" };
        assert!(t.contains(label), "{}: {}", eq, t);
        assert!(t.contains(&format!("genus:      {}", v["genus"])), "{}", t);
    }
}

#[test]
fn timing_only_on_request() {
    let o = json(&painleve(&["analyze", "y' = y", "--format", "json"]));
    assert!(o.get("timing_ms").is_none());
    let o = json(&painleve(&["analyze", "y' = y", "--format", "json", "--timing"]));
    assert!(o["timing_ms"].is_number());
}

#[test]
fn no_witness_flag() {
    let v = json(&painleve(&["analyze", "(y')^2 = y - z^2", "--no-witness", "--format", "json"]));
    assert!(v["witness"].is_null());
    assert_eq!(v["pp"], false);
}

#[test]
fn bundled_corpus_passes() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/paper_examples.corpus");
    let o = painleve(&["corpus", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("0 fail"), "{}", stdout(&o));
}

#[test]
fn corpus_mismatch_exits_one() {
    let p = temp_corpus("mismatch.corpus", "(y')^2 = y^3 + z | expect: pp\ny' = y | expect: pp\n");
    let o = painleve(&["corpus", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("- expected pp"), "{}", out);
    assert!(out.contains("+ observed not-pp"), "{}", out);
    assert!(out.contains("2 cases: 1 pass, 1 fail"), "{}", out);
}

#[test]
fn empty_corpus_exits_zero() {
    let p = temp_corpus("empty.corpus", "# nothing here\n\n");
    let o = painleve(&["corpus", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 cases"), "{}", stdout(&o));
}

#[test]
fn missing_corpus_exits_four() {
    let o = painleve(&["corpus", "/nonexistent/painleve.corpus"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).starts_with("error[io-error]"), "{}", stderr(&o));
}

#[test]
fn corpus_output_keeps_input_order() {
    let lines = ["y' = y^2 + z", "(y')^2 = y - z^2", "y' = y", "(y')^2 = y^3 - y", "(y')^3 = y^2"];
    let p = temp_corpus("order.corpus", &lines.join("\n"));
    let one = painleve(&["corpus", p.to_str().unwrap(), "--threads", "1", "--format", "json"]);
    let four = painleve(&["corpus", p.to_str().unwrap(), "--threads", "4", "--format", "json"]);
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one);
    let inputs: Vec<String> = v["cases"].as_array().unwrap().iter().map(|c| c["equation"].as_str().unwrap().to_string()).collect();
    assert_eq!(inputs, lines);
}
