//! Corpus files: one equation per line, `#` comments, optional assertions
//! after `| expect:` separated by commas.
//!
//! ```text
//! (y')^2 = y - z^2        | expect: not-pp
//! y' = 1 + y^2            | expect: pp, class=riccati, genus=0
//! (y')^2 = y^2            | expect: error=reducible
//! ```

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::report::AnalysisReport;
use super::{analyze, AnalyzeOptions, CliError, Format, Outcome, EXIT_ASSERTION, EXIT_INTERNAL, EXIT_OK, EXIT_UNSUPPORTED};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    Pp,
    NotPp,
    Class(String),
    Error(String),
    Genus(u32),
}

impl Expectation {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s {
            "pp" => return Some(Expectation::Pp),
            "not-pp" => return Some(Expectation::NotPp),
            _ => {}
        }
        let (k, v) = s.split_once('=')?;
        let v = v.trim();
        match k.trim() {
            "class" => Some(Expectation::Class(v.into())),
            "error" => Some(Expectation::Error(v.into())),
            "genus" => v.parse().ok().map(Expectation::Genus),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Expectation::Pp => "pp".into(),
            Expectation::NotPp => "not-pp".into(),
            Expectation::Class(c) => format!("class={}", c),
            Expectation::Error(c) => format!("error={}", c),
            Expectation::Genus(g) => format!("genus={}", g),
        }
    }

    /// `None` when the expectation holds, otherwise what was observed.
    fn check(&self, r: &Result<AnalysisReport, CliError>) -> Option<String> {
        let observed = match (self, r) {
            (Expectation::Error(c), Err(e)) if &e.code == c => return None,
            (_, Err(e)) => format!("error={}", e.code),
            (Expectation::Pp, Ok(r)) | (Expectation::NotPp, Ok(r)) => {
                let got = if r.pp { Expectation::Pp } else { Expectation::NotPp };
                if &got == self {
                    return None;
                }
                got.render()
            }
            (Expectation::Class(c), Ok(r)) => match &r.classification {
                Some(ci) if &ci.class == c => return None,
                Some(ci) => format!("class={}", ci.class),
                None => "not-pp".into(),
            },
            (Expectation::Genus(g), Ok(r)) => {
                if r.genus == *g {
                    return None;
                }
                format!("genus={}", r.genus)
            }
            (Expectation::Error(_), Ok(r)) => if r.pp { "pp" } else { "not-pp" }.into(),
        };
        Some(observed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusCase {
    pub line: usize,
    pub equation: String,
    pub expect: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusParseError {
    pub line: usize,
    pub message: String,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusCase>, CorpusParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
        if line.is_empty() {
            continue;
        }
        let (eq, expect) = match line.split_once('|') {
            None => (line, Vec::new()),
            Some((eq, rest)) => {
                let rest = rest.trim();
                let body = rest.strip_prefix("expect:").ok_or_else(|| CorpusParseError {
                    line: i + 1,
                    message: format!("expected `expect:` after `|`, found `{}`", rest),
                })?;
                let mut ex = Vec::new();
                for item in body.split(',').filter(|s| !s.trim().is_empty()) {
                    ex.push(Expectation::parse(item).ok_or_else(|| CorpusParseError {
                        line: i + 1,
                        message: format!("unknown expectation `{}`", item.trim()),
                    })?);
                }
                (eq, ex)
            }
        };
        out.push(CorpusCase { line: i + 1, equation: eq.trim().to_string(), expect });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub expected: String,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub line: usize,
    pub equation: String,
    pub status: CaseStatus,
    pub verdict: String,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    pub report: Option<AnalysisReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub pass: usize,
    pub fail: usize,
    pub unsupported: usize,
}

pub fn run_case(case: &CorpusCase, opts: &AnalyzeOptions) -> CaseResult {
    let r = analyze(&case.equation, opts);
    let mismatches: Vec<Mismatch> = case
        .expect
        .iter()
        .filter_map(|e| e.check(&r).map(|observed| Mismatch { expected: e.render(), observed }))
        .collect();
    let verdict = match &r {
        Ok(rep) => match &rep.classification {
            Some(c) => format!("pp ({})", c.class),
            None => "not-pp".into(),
        },
        Err(e) => format!("error={}", e.code),
    };
    let status = if !mismatches.is_empty() {
        CaseStatus::Fail
    } else {
        match &r {
            Ok(_) => CaseStatus::Pass,
            Err(e) if e.exit == EXIT_UNSUPPORTED && case.expect.is_empty() => CaseStatus::Unsupported,
            Err(_) if !case.expect.is_empty() => CaseStatus::Pass,
            Err(_) => CaseStatus::Fail,
        }
    };
    CaseResult { line: case.line, equation: case.equation.clone(), status, verdict, mismatches, report: r.ok() }
}

/// Runs all cases on a worker pool; results keep input order.
pub fn run_cases(cases: &[CorpusCase], opts: &AnalyzeOptions, threads: usize) -> Vec<CaseResult> {
    let slots: Vec<Mutex<Option<CaseResult>>> = cases.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|sc| {
        for _ in 0..threads.max(1).min(cases.len().max(1)) {
            sc.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cases.len() {
                    break;
                }
                let r = run_case(&cases[i], opts);
                *slots[i].lock().unwrap() = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().expect("every case ran")).collect()
}

pub fn summarize(results: &[CaseResult]) -> CorpusSummary {
    let mut s = CorpusSummary::default();
    for r in results {
        match r.status {
            CaseStatus::Pass => s.pass += 1,
            CaseStatus::Fail => s.fail += 1,
            CaseStatus::Unsupported => s.unsupported += 1,
        }
    }
    s
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn render_text(results: &[CaseResult], summary: &CorpusSummary) -> String {
    let mut out = Vec::new();
    for r in results {
        let tag = match r.status {
            CaseStatus::Pass => "pass",
            CaseStatus::Fail => "FAIL",
            CaseStatus::Unsupported => "unsupported",
        };
        out.push(format!("{:>4}  {:<11}  {:<40}  {}", r.line, tag, r.equation, r.verdict));
        for m in &r.mismatches {
            out.push(format!("        - expected {}", m.expected));
            out.push(format!("        + observed {}", m.observed));
        }
    }
    out.push(format!(
        "{} cases: {} pass, {} fail, {} unsupported",
        results.len(),
        summary.pass,
        summary.fail,
        summary.unsupported
    ));
    out.join("\n")
}

fn render_json(results: &[CaseResult], summary: &CorpusSummary) -> String {
    let v = serde_json::json!({
        "schema": super::report::SCHEMA,
        "cases": results,
        "summary": summary,
    });
    serde_json::to_string_pretty(&serde_json::to_value(v).unwrap()).unwrap()
}

/// Runs a corpus given as text. Exit 0 iff every assertion holds.
pub fn run_corpus_text(text: &str, opts: &AnalyzeOptions, format: Format, threads: usize) -> Outcome {
    let cases = match parse_corpus(text) {
        Ok(c) => c,
        Err(e) => {
            let err = CliError {
                code: "corpus-syntax".into(),
                message: format!("line {}: {}", e.line, e.message),
                exit: EXIT_ASSERTION,
            };
            return Outcome {
                exit: err.exit,
                stdout: String::new(),
                stderr: match format {
                    Format::Text => err.render_text(),
                    Format::Json => err.render_json(),
                },
            };
        }
    };
    let results = run_cases(&cases, opts, threads);
    let summary = summarize(&results);
    let exit = if summary.fail == 0 { EXIT_OK } else { EXIT_ASSERTION };
    let stdout = match format {
        Format::Text => render_text(&results, &summary),
        Format::Json => render_json(&results, &summary),
    };
    Outcome { exit, stdout, stderr: String::new() }
}

pub fn run_corpus(path: &std::path::Path, opts: &AnalyzeOptions, format: Format, threads: usize) -> Outcome {
    match std::fs::read_to_string(path) {
        Ok(text) => run_corpus_text(&text, opts, format, threads),
        Err(e) => {
            let err = CliError { code: "io-error".into(), message: format!("{}: {}", path.display(), e), exit: EXIT_INTERNAL };
            Outcome {
                exit: err.exit,
                stdout: String::new(),
                stderr: match format {
                    Format::Text => err.render_text(),
                    Format::Json => err.render_json(),
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_lines() {
        let c = parse_corpus("# header\n\ny' = 1 + y^2 | expect: pp, class=riccati # trailing\n(y')^2 = y^3 + z\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].line, 3);
        assert_eq!(c[0].expect, vec![Expectation::Pp, Expectation::Class("riccati".into())]);
        assert!(c[1].expect.is_empty());
        assert!(parse_corpus("y' = y | expect: maybe").is_err());
        assert!(parse_corpus("y' = y | pp").is_err());
    }

    #[test]
    fn empty_corpus() {
        let o = run_corpus_text("# nothing\n", &AnalyzeOptions::default(), Format::Text, 2);
        assert_eq!(o.exit, EXIT_OK);
        assert!(o.stdout.contains("0 cases"));
    }

    #[test]
    fn mismatch_is_reported() {
        let opts = AnalyzeOptions { no_witness: true, ..Default::default() };
        let o = run_corpus_text("(y')^2 = y^3 + z | expect: pp\n", &opts, Format::Text, 1);
        assert_eq!(o.exit, EXIT_ASSERTION);
        assert!(o.stdout.contains("- expected pp"));
        assert!(o.stdout.contains("+ observed not-pp"));
    }

    #[test]
    fn order_is_preserved() {
        let text = "y' = 1 + y^2\n(y')^2 = y^3 - y\n(y')^2 = y - z^2\ny' = y^2 + z\n(y')^2 = y^2 | expect: error=reducible\n";
        let opts = AnalyzeOptions { no_witness: true, ..Default::default() };
        let cases = parse_corpus(text).unwrap();
        let par = run_cases(&cases, &opts, 4);
        let seq = run_cases(&cases, &opts, 1);
        assert_eq!(par, seq);
        assert_eq!(par.iter().map(|r| r.line).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5]);
        assert!(par.iter().all(|r| r.status == CaseStatus::Pass));
    }
}
