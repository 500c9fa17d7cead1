//! Browser bindings. Every entry point takes plain strings and returns a JSON
//! string, so the page needs no generated types.

use num_integer::Integer;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use painleve::cli::{analyze as analyze_report, parse_rational, witness_info, AnalyzeOptions, CliError, EXIT_INPUT};
use painleve::parser::{parse_equation, validate};
use painleve::witness::{branched_witness, WitnessOptions};

fn error_json(e: &CliError) -> Value {
    json!({ "error": { "code": e.code, "message": e.message } })
}

/// Full report for one equation, witness search included.
pub fn analyze_json(equation: &str) -> Value {
    match analyze_report(equation, &AnalyzeOptions::default()) {
        Ok(r) => serde_json::to_value(&r).expect("report serializes"),
        Err(e) => error_json(&e),
    }
}

/// Branched witness at the first pole for base point `z1`.
pub fn witness_json(equation: &str, z1: &str) -> Value {
    let Some(z) = parse_rational(z1) else {
        let e = CliError { code: "bad-argument".into(), message: format!("not a rational number: `{}`", z1), exit: EXIT_INPUT };
        return error_json(&e);
    };
    let eq = match parse_equation(equation).and_then(|e| validate(&e)) {
        Ok(eq) => eq,
        Err(e) => return error_json(&e.into()),
    };
    match branched_witness(&eq, &z, &WitnessOptions::default()) {
        Ok(w) => serde_json::to_value(witness_info(&w)).expect("witness serializes"),
        Err(e) => error_json(&e.into()),
    }
}

/// Verdicts for `(y')^p = y^q`, `1 ≤ p, q ≤ max`, against the rule
/// `|p - q| ≤ 1` for coprime exponents. Non-coprime pairs are reducible.
pub fn monomial_grid_json(max: u32) -> Value {
    let max = max.clamp(1, 9);
    let mut cells = Vec::new();
    for p in 1..=max {
        for q in 1..=max {
            let text = format!("(y')^{} = y^{}", p, q);
            let cell = if p.gcd(&q) != 1 {
                json!({ "p": p, "q": q, "status": "reducible" })
            } else {
                let expected = (p as i64 - q as i64).abs() <= 1;
                match analyze_report(&text, &AnalyzeOptions { no_witness: true, ..Default::default() }) {
                    Ok(r) => json!({ "p": p, "q": q, "status": if r.pp { "pp" } else { "not-pp" }, "expected": expected, "poles": r.poles.len() }),
                    Err(e) => json!({ "p": p, "q": q, "status": "error", "error": e.code }),
                }
            };
            cells.push(cell);
        }
    }
    json!({ "max": max, "cells": cells })
}

#[wasm_bindgen]
pub fn analyze(equation: &str) -> String {
    analyze_json(equation).to_string()
}

#[wasm_bindgen]
pub fn witness(equation: &str, z1: &str) -> String {
    witness_json(equation, z1).to_string()
}

#[wasm_bindgen]
pub fn monomial_grid(max: u32) -> String {
    monomial_grid_json(max).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intro_report() {
        let v = analyze_json("(y')^2 = y - z^2");
        assert_eq!(v["pp"], false);
        assert_eq!(v["poles"][0]["pole_order"], 1);
    }

    #[test]
    fn parse_errors_become_json() {
        assert_eq!(analyze_json("y' = ")["error"]["code"], "syntax-error");
        assert_eq!(witness_json("y' = y", "x")["error"]["code"], "bad-argument");
    }

    #[test]
    fn witness_at_one() {
        let v = witness_json("(y')^2 = y - z^2", "1");
        assert_eq!(v["leading_minpoly"], "c^2 + 8/9");
        assert_eq!(witness_json("(y')^2 = y - z^2", "0")["error"]["code"], "bad-base-point");
    }

    #[test]
    fn grid_matches_the_rule() {
        let v = monomial_grid_json(5);
        let cells = v["cells"].as_array().unwrap();
        assert_eq!(cells.len(), 25);
        for c in cells.iter().filter(|c| c["status"] != "reducible") {
            assert_eq!(c["status"] == "pp", c["expected"] == true, "{}", c);
        }
    }
}
