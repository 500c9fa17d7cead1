//! Command-line front end: single-equation analysis and corpus runs.

pub mod corpus;
pub mod report;

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::field::render_rational;
use crate::algebra::{AlgebraError, Field};
use crate::classify::{decide_pp_with, render_coeff, Classification, Verdict};
use crate::parser::{parse_equation, validate, Certificate, EquationError};
use crate::puiseux::default_truncation;
use crate::witness::{branched_witness, BranchWitness, WitnessOptions};

use report::{
    AnalysisReport, Approx, ClassificationInfo, DerivationInfo, EquationInfo, PoleInfo, TermInfo, WitnessFailure,
    WitnessInfo, SCHEMA,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Base points tried, in order, when none is given.
pub const DEFAULT_BASE_POINTS: [(i64, i64); 6] = [(1, 1), (2, 1), (-1, 1), (3, 1), (-2, 1), (1, 2)];

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub truncation: Option<usize>,
    pub witness_at: Option<BigRational>,
    /// Residual target for witnesses, in powers of `z - z1`.
    pub witness_order: Option<u32>,
    pub no_witness: bool,
    /// Heuristic irreducibility becomes an error.
    pub strict: bool,
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn render_text(&self) -> String {
        format!("error[{}]: {}", self.code, self.message)
    }

    pub fn render_json(&self) -> String {
        let v = serde_json::json!({
            "schema": SCHEMA,
            "error": { "code": self.code, "message": self.message, "exit": self.exit },
        });
        serde_json::to_string_pretty(&v).unwrap()
    }
}

impl From<EquationError> for CliError {
    fn from(e: EquationError) -> Self {
        let exit = match e {
            EquationError::Reducible { .. } | EquationError::IrreducibilityUnknown => EXIT_UNSUPPORTED,
            _ => EXIT_INPUT,
        };
        CliError { code: e.code().into(), message: e.to_string(), exit }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        let exit = match e {
            AlgebraError::UnsupportedExtension { .. } => EXIT_UNSUPPORTED,
            _ => EXIT_INTERNAL,
        };
        CliError { code: e.code().into(), message: e.to_string(), exit }
    }
}

/// A rational from `a`, `a/b` or a decimal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Ok(q) = BigRational::from_str(s) {
        return Some(q);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.')?;
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || int.len() + frac.len() == 0 {
        return None;
    }
    let digits = BigInt::from_str(&format!("0{}{}", int, frac)).ok()?;
    let q = BigRational::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    Some(if neg { -q } else { q })
}

fn classification_info(c: &Classification) -> ClassificationInfo {
    let mut params = BTreeMap::new();
    match c {
        Classification::Riccati { a0, a1, a2, coordinate } => {
            params.insert("a0".into(), render_coeff(a0));
            params.insert("a1".into(), render_coeff(a1));
            params.insert("a2".into(), render_coeff(a2));
            params.insert("coordinate".into(), coordinate.clone());
        }
        Classification::WeierstrassType { cubic, depressed, scale } => {
            let q = crate::algebra::QField;
            params.insert("cubic".into(), crate::algebra::upoly::render(&q, cubic, "t"));
            params.insert("a".into(), render_rational(&depressed.0));
            params.insert("b".into(), render_rational(&depressed.1));
            params.insert("scale".into(), render_coeff(scale));
        }
        Classification::ConstantsCase { genus } | Classification::GenusOnly { genus } => {
            params.insert("genus".into(), genus.to_string());
        }
    }
    ClassificationInfo { class: c.class().into(), text: c.render(), params, note: c.note().map(String::from) }
}

pub fn witness_info(w: &BranchWitness) -> WitnessInfo {
    let f = &w.field;
    let term = |e: &BigRational, c: &Vec<BigRational>| TermInfo {
        exponent: render_rational(e),
        coefficient: f.render(c),
        approx: f.approx(c).map(Approx::new),
    };
    WitnessInfo {
        base_point: render_rational(&w.base_point),
        m: w.m,
        field: if f.degree() == 1 { "Q".into() } else { f.render_minpoly() },
        leading: term(&w.leading.0, &w.leading.1),
        leading_minpoly: w.leading_minpoly(),
        series: w.render_y("z - z1"),
        terms: w.y.terms(f).map(|(e, c)| term(&e, c)).collect(),
        residual_order: w.residual.render(),
        target: render_rational(&w.target),
        passes: w.residual_passes(),
    }
}

/// Parse, validate, decide and (for equations without the property) look
/// for a witness.
pub fn analyze(text: &str, opts: &AnalyzeOptions) -> Result<AnalysisReport, CliError> {
    // the clock is unavailable on wasm32, so read it only on request
    let start = opts.timing.then(Instant::now);
    let eq = validate(&parse_equation(text)?)?;
    if opts.strict && eq.certificate() == Some(Certificate::Heuristic) {
        return Err(CliError {
            code: "heuristic-irreducibility".into(),
            message: "absolute irreducibility is only heuristic (strict mode)".into(),
            exit: EXIT_UNSUPPORTED,
        });
    }
    let n = opts.truncation.unwrap_or_else(|| default_truncation(&eq));
    let decision = decide_pp_with(&eq, n)?;
    let mut warnings: Vec<String> = eq.warnings().to_vec();
    let (classification, poles) = match &decision.verdict {
        Verdict::PP { classification } => (Some(classification_info(classification)), Vec::new()),
        Verdict::NotPP { poles, .. } => (
            None,
            poles
                .iter()
                .map(|p| PoleInfo {
                    center: p.center.clone(),
                    center_approx: p.center_approx.map(Approx::new),
                    at_infinity: p.at_infinity,
                    s_value: p.s_value.clone(),
                    s_approx: p.s_approx.map(Approx::new),
                    ramification: p.ramification,
                    residue_degree: p.residue_degree,
                    pole_order: p.pole_order,
                    local_vector_field: p.local_vector_field.clone(),
                    t_expansion: p.t_expansion.clone(),
                    s_expansion: p.s_expansion.clone(),
                })
                .collect(),
        ),
    };
    let mut witness = None;
    let mut failures = Vec::new();
    if !decision.verdict.is_pp() && !opts.no_witness {
        let mut wopts = WitnessOptions { truncation: n, ..Default::default() };
        if let Some(k) = opts.witness_order {
            wopts.target = BigRational::from_integer(k.into());
        }
        let candidates: Vec<BigRational> = match &opts.witness_at {
            Some(z) => vec![z.clone()],
            None => DEFAULT_BASE_POINTS.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect(),
        };
        for z1 in candidates {
            match branched_witness(&eq, &z1, &wopts) {
                Ok(w) => {
                    witness = Some(witness_info(&w));
                    break;
                }
                Err(e) => failures.push(WitnessFailure {
                    base_point: render_rational(&z1),
                    code: e.code().into(),
                    message: e.to_string(),
                }),
            }
        }
        if witness.is_some() && opts.witness_at.is_none() {
            failures.clear();
        }
        if witness.is_none() {
            warnings.push("no branched witness was constructed".into());
        }
    }
    if decision.conditional {
        warnings.push("verdict is conditional on absolute irreducibility".into());
    }
    let d = &decision.derivation;
    Ok(AnalysisReport {
        schema: SCHEMA,
        input: text.trim().to_string(),
        equation: EquationInfo {
            canonical: eq.f().to_string(),
            ode: eq.render_ode(),
            autonomous: eq.autonomous(),
            deg_s: eq.deg_s(),
            deg_t: eq.deg_t(),
            irreducibility: eq.certificate().map_or("unknown", |c| c.label()).into(),
        },
        derivation: DerivationInfo { dt: d.dt.render(), ds: d.ds.render(), identity_holds: d.check_identity() },
        genus: decision.genus,
        pp: decision.verdict.is_pp(),
        conditional: decision.conditional,
        classification,
        poles,
        witness,
        witness_failures: failures,
        truncation: n,
        timing_ms: start.map(|s| s.elapsed().as_secs_f64() * 1e3),
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Output of a command: exit code and the two streams.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_analyze(text: &str, opts: &AnalyzeOptions, format: Format, color: bool) -> Outcome {
    match analyze(text, opts) {
        Ok(r) => Outcome {
            exit: EXIT_OK,
            stdout: match format {
                Format::Text => r.to_text(color),
                Format::Json => r.to_json(),
            },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            exit: e.exit,
            stdout: String::new(),
            stderr: match format {
                Format::Text => e.render_text(),
                Format::Json => e.render_json(),
            },
        },
    }
}
