//! Plain-data analysis reports: serialized as JSON (schema 1, sorted keys)
//! or rendered as text.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// A complex approximation printed with 15 significant digits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub re: f64,
    pub im: f64,
}

impl Approx {
    /// Parts negligible against the modulus are printed as zero.
    pub fn new(c: Complex64) -> Self {
        let tiny = 1e-13 * c.norm();
        let snap = |x: f64| if x.abs() < tiny { 0.0 } else { round15(x) };
        Approx { re: snap(c.re), im: snap(c.im) }
    }

    pub fn render(&self) -> String {
        let c = Complex64::new(self.re, self.im);
        crate::algebra::field::render_complex(c)
    }
}

/// Round to 15 significant digits so that output is stable across
/// platforms.
pub fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.14e}", x).parse().unwrap()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationInfo {
    /// `f(S, T)` with `S = y'`, `T = y`.
    pub canonical: String,
    pub ode: String,
    pub autonomous: bool,
    pub deg_s: u32,
    pub deg_t: u32,
    pub irreducibility: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationInfo {
    pub dt: String,
    pub ds: String,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationInfo {
    pub class: String,
    pub text: String,
    pub params: BTreeMap<String, String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleInfo {
    pub center: String,
    pub center_approx: Option<Approx>,
    pub at_infinity: bool,
    /// `s` at the place, `null` when `s` has a pole there.
    pub s_value: Option<String>,
    pub s_approx: Option<Approx>,
    pub ramification: u32,
    pub residue_degree: usize,
    pub pole_order: u32,
    pub local_vector_field: String,
    pub t_expansion: String,
    pub s_expansion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermInfo {
    pub exponent: String,
    pub coefficient: String,
    pub approx: Option<Approx>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessInfo {
    pub base_point: String,
    pub m: u32,
    /// Minimal polynomial of the generator of the coefficient field.
    pub field: String,
    pub leading: TermInfo,
    pub leading_minpoly: String,
    pub series: String,
    pub terms: Vec<TermInfo>,
    pub residual_order: String,
    pub target: String,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFailure {
    pub base_point: String,
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub input: String,
    pub equation: EquationInfo,
    pub derivation: DerivationInfo,
    pub genus: u32,
    pub pp: bool,
    pub conditional: bool,
    pub classification: Option<ClassificationInfo>,
    pub poles: Vec<PoleInfo>,
    pub witness: Option<WitnessInfo>,
    pub witness_failures: Vec<WitnessFailure>,
    pub truncation: usize,
    /// Present only on request; it would break byte-identical output.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<f64>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        // Value maps are ordered, so keys come out sorted.
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).unwrap()
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn verdict_label(&self) -> &'static str {
        if self.pp {
            "PP"
        } else {
            "not PP"
        }
    }

    pub fn to_text(&self, color: bool) -> String {
        let paint = |code: &str, s: &str| if color { format!("\x1b[{}m{}\x1b[0m", code, s) } else { s.to_string() };
        let mut out = Vec::new();
        out.push(format!("equation:   {}", self.input));
        out.push(format!("curve:      {} = 0  ({})", self.equation.canonical, self.equation.irreducibility));
        out.push(format!("D(t) = {}", self.derivation.dt));
        out.push(format!("D(s) = {}", self.derivation.ds));
        out.push(format!("genus:      {}", self.genus));
        let verdict = if self.pp { paint("32", "PP") } else { paint("31", "not PP") };
        let cond = if self.conditional { " (conditional)" } else { "" };
        out.push(format!("verdict:    {}{}", verdict, cond));
        if let Some(c) = &self.classification {
            out.push(format!("class:      {}: {}", c.class, c.text));
            for (k, v) in &c.params {
                out.push(format!("  {} = {}", k, v));
            }
            if let Some(n) = &c.note {
                out.push(format!("  note: {}", n));
            }
        }
        for (i, p) in self.poles.iter().enumerate() {
            let s = p.s_value.as_deref().unwrap_or("oo");
            out.push(format!(
                "pole {}:     {}, s = {}, e = {}, residue degree {}, pole order {}",
                i + 1,
                p.center,
                s,
                p.ramification,
                p.residue_degree,
                p.pole_order
            ));
            out.push(format!("  t = {}", p.t_expansion));
            out.push(format!("  s = {}", p.s_expansion));
            out.push(format!("  D(u) = {}", p.local_vector_field));
        }
        if let Some(w) = &self.witness {
            out.push(format!("witness:    z1 = {}, m = {}, coefficients in {}", w.base_point, w.m, w.field));
            out.push(format!("  y = {}", w.series));
            out.push(format!(
                "  leading branched term: ({}) * (z - z1)^({}), minimal polynomial {}",
                w.leading.coefficient, w.leading.exponent, w.leading_minpoly
            ));
            let ok = if w.passes { paint("32", "pass") } else { paint("31", "fail") };
            out.push(format!("  residual order {} (target {}): {}", w.residual_order, w.target, ok));
        }
        for f in &self.witness_failures {
            out.push(format!("witness at z1 = {} failed [{}]: {}", f.base_point, f.code, f.message));
        }
        for w in &self.warnings {
            out.push(format!("warning:    {}", paint("33", w)));
        }
        if let Some(t) = self.timing_ms {
            out.push(format!("time:       {:.1} ms", t));
        }
        out.join("\n")
    }
}
