//! Built-in example scenarios and the suite runner.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::build::{parse_scenario, Scenario};
use super::execute::{execute, RunOptions};
use super::report::{Format, Outcome, Report};
use super::ScenarioError;

macro_rules! fixtures {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../../scenarios/", $file, ".json")))),*]
    };
}

const FIXTURES: &[(&str, &str)] = fixtures![
    "dim5_AmB",
    "dim5_AeqB",
    "dim4_amb",
    "dim4_AeqB",
    "dim4_split_AmB",
    "dim4_split_AeqB",
    "dim4_same_AmB",
    "dim3_AmB",
    "dim3_AeqB",
    "dim2_AmB",
    "AeqB_trivial",
    "dim4_rotated_noncommuting",
    "dim4_shared_outcome",
    "tensor_AmB",
    "tensor_commutators",
    "tensor_singlet_family",
    "ghz_triple",
    "borderline",
];

/// `(file stem, document text)` of every shipped fixture.
pub fn fixture_texts() -> &'static [(&'static str, &'static str)] {
    FIXTURES
}

/// Every built-in scenario keyed by its `name`.
pub fn library() -> Result<BTreeMap<String, Scenario>, ScenarioError> {
    let mut out = BTreeMap::new();
    for (file, text) in FIXTURES {
        let s = parse_scenario(text).map_err(|e| ScenarioError::Validation {
            context: format!("fixture {file}.json"),
            message: e.to_string(),
        })?;
        out.insert(s.name().to_string(), s);
    }
    Ok(out)
}

/// Loads every `*.json` file of `dir` as a scenario.
pub fn library_from_dir(dir: &Path) -> Result<BTreeMap<String, Scenario>, ScenarioError> {
    let io = |e: std::io::Error| ScenarioError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "json"));
    paths.sort();
    let mut out = BTreeMap::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| ScenarioError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })?;
        let s = parse_scenario(&text).map_err(|e| ScenarioError::Validation {
            context: p.display().to_string(),
            message: e.to_string(),
        })?;
        out.insert(s.name().to_string(), s);
    }
    Ok(out)
}

/// One line of the pass/fail matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub scenario: String,
    pub query: String,
    pub kind: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detail: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub passed: usize,
    pub failed: usize,
    pub rows: Vec<SuiteRow>,
    pub reports: Vec<Report>,
}

impl SuiteReport {
    pub fn success(&self) -> bool {
        self.failed == 0
    }
}

/// Runs the scenarios whose name satisfies `filter`, in name order.
pub fn run_suite(scenarios: &BTreeMap<String, Scenario>, filter: impl Fn(&str) -> bool) -> SuiteReport {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (name, s) in scenarios.iter().filter(|(n, _)| filter(n)) {
        let report = execute(s, RunOptions::default());
        for q in &report.queries {
            let mut detail: Vec<String> = q.expectation.as_ref().map(|e| e.mismatches.clone()).unwrap_or_default();
            if q.expectation.is_none() {
                if let Outcome::Error { kind, message } = &q.outcome {
                    detail.push(format!("{kind}: {message}"));
                }
            }
            rows.push(SuiteRow {
                scenario: name.clone(),
                query: q.display_label(),
                kind: q.kind.clone(),
                passed: q.success(),
                detail,
            });
        }
        reports.push(report);
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    SuiteReport {
        failed: rows.len() - passed,
        passed,
        rows,
        reports,
    }
}

pub fn render_suite(suite: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(suite).expect("suite reports always serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let w_s = suite
                .rows
                .iter()
                .map(|r| r.scenario.chars().count())
                .max()
                .unwrap_or(0)
                .max(8);
            let w_q = suite
                .rows
                .iter()
                .map(|r| r.query.chars().count())
                .max()
                .unwrap_or(0)
                .max(5);
            let w_k = suite.rows.iter().map(|r| r.kind.len()).max().unwrap_or(0).max(4);
            let mut out = String::new();
            let _ = writeln!(out, "{:<w_s$}  {:<w_q$}  {:<w_k$}  result", "scenario", "query", "kind");
            for r in &suite.rows {
                let pad_s = w_s - r.scenario.chars().count();
                let pad_q = w_q - r.query.chars().count();
                let _ = writeln!(
                    out,
                    "{}{}  {}{}  {:<w_k$}  {}",
                    r.scenario,
                    " ".repeat(pad_s),
                    r.query,
                    " ".repeat(pad_q),
                    r.kind,
                    if r.passed { "PASS" } else { "FAIL" }
                );
                for d in &r.detail {
                    let _ = writeln!(out, "    {d}");
                }
            }
            let _ = writeln!(
                out,
                "\n{} scenarios, {} checks: {} passed, {} failed",
                suite.reports.len(),
                suite.rows.len(),
                suite.passed,
                suite.failed
            );
            out
        }
    }
}
