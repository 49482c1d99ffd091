//! Structured results of a scenario run and their text/JSON rendering.
//!
//! Complex numbers serialize as `[re, im]`. Floats are written in shortest
//! round-trip form, so the JSON rendering parses back to an identical report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::numerics::vector;
use crate::{SolutionSpace, SubspaceBasis, C64};

/// `[re, im]`
pub type Amplitude = [f64; 2];

/// Components below this modulus are written as exact zero.
pub const ZERO_CUTOFF: f64 = 1e-12;

fn clean(x: f64) -> f64 {
    if x.abs() < ZERO_CUTOFF {
        0.0
    } else {
        x
    }
}

/// Phase-fixed copy of `v` with tiny components zeroed.
pub fn canonical_vector(v: &[C64]) -> Vec<Amplitude> {
    let mut w = v.to_vec();
    vector::fix_phase(&mut w);
    w.iter()
        .map(|c| {
            if c.norm() < ZERO_CUTOFF {
                [0.0, 0.0]
            } else {
                [clean(c.re), clean(c.im)]
            }
        })
        .collect()
}

pub fn amplitude(c: C64) -> Amplitude {
    [clean(c.re), clean(c.im)]
}

pub fn canonical_basis(b: &SubspaceBasis) -> Vec<Vec<Amplitude>> {
    b.canonical().vectors().iter().map(|v| canonical_vector(v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub tolerance: ToleranceEcho,
    pub queries: Vec<QueryReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceEcho {
    pub abs: f64,
    pub rel: f64,
}

impl Report {
    pub fn errored(&self) -> usize {
        self.queries
            .iter()
            .filter(|q| matches!(q.outcome, Outcome::Error { .. }))
            .count()
    }

    /// Queries whose expectation annotation was not met.
    pub fn unmet(&self) -> usize {
        self.queries
            .iter()
            .filter(|q| q.expectation.as_ref().is_some_and(|e| !e.met))
            .count()
    }

    /// Every query ran (or failed as expected) and every expectation held.
    pub fn success(&self) -> bool {
        self.queries.iter().all(QueryReport::success)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub kind: String,
    pub seed: u64,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectation: Option<ExpectationCheck>,
}

impl QueryReport {
    pub fn success(&self) -> bool {
        match &self.expectation {
            Some(e) => e.met,
            None => matches!(self.outcome, Outcome::Ok { .. }),
        }
    }

    /// Label, or `#index` when none was given.
    pub fn display_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| format!("#{}", self.index))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Ok { result: QueryResult },
    Error { kind: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationCheck {
    pub met: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum QueryResult {
    Probability {
        probability: f64,
    },
    Verdict {
        holds: bool,
        degenerate: bool,
        conditional_probability: Option<f64>,
        residual: f64,
    },
    Space(SpaceResult),
    Symmetric {
        symmetric: bool,
    },
    Joint {
        complete: bool,
        total_rank: usize,
        blocks: Vec<BlockResult>,
        labels: Vec<String>,
    },
    Correlation {
        value: Amplitude,
        opposite_residual: f64,
        same_residual: f64,
    },
    SharedOutcome(SharedResult),
    Commutators {
        applicable: bool,
        passes: bool,
        premise_residuals: [f64; 2],
        commutator_norm: f64,
        vector_residual: f64,
        expectation_residual: f64,
        product_residual: f64,
    },
    Covariance {
        passes: bool,
        trials: usize,
        invariant_trials: usize,
    },
    FamilyInvariance {
        passes: bool,
        trials: usize,
        antisymmetric_passes: usize,
        symmetric_failures: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceResult {
    pub feasible: bool,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    pub constraints: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    pub basis: Vec<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Amplitude>>,
    /// Outcome labels of the coordinate vectors, empty when some `e_k` is
    /// not a joint eigenvector.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl SpaceResult {
    pub fn from_space(s: &SolutionSpace, complete: Option<bool>, labels: Vec<String>) -> Self {
        Self {
            feasible: s.feasible,
            dimension: s.dimension(),
            complete,
            constraints: s.constraints.iter().map(|c| c.label.clone()).collect(),
            certificate: s.certificate.as_ref().map(|c| c.describe()),
            basis: canonical_basis(&s.linear_basis),
            witness: s.witness.as_ref().map(|w| canonical_vector(w.as_slice())),
            labels,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockResult {
    pub alpha: f64,
    pub beta: f64,
    pub dimension: usize,
    pub basis: Vec<Vec<Amplitude>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedResult {
    pub beta: f64,
    pub exclusive: bool,
    pub exclusivity: Vec<ExclusivityResult>,
    pub forward: Vec<ForwardResult>,
    pub reverse: Vec<ReverseResult>,
    pub max_reverse_probability: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_eigenspace: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenstate_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutes_on_state: Option<bool>,
    /// `null` when the pair does not commute.
    #[serde(default)]
    pub symmetric: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusivityResult {
    pub alpha: f64,
    pub beta: f64,
    pub other_beta: f64,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardResult {
    pub alpha: f64,
    pub holds: bool,
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseResult {
    pub gamma: f64,
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

/// Inverse of the JSON rendering.
pub fn parse_report(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn sign_char(x: f64) -> String {
    if x == 1.0 {
        "+".into()
    } else if x == -1.0 {
        "-".into()
    } else {
        format!("{x}")
    }
}

/// `|+-⟩`-style ket for a tuple of outcome values.
pub fn ket(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|&v| sign_char(v)).collect();
    if inner.iter().all(|s| s.len() == 1) {
        format!("|{}⟩", inner.concat())
    } else {
        format!("|{}⟩", inner.join(","))
    }
}

pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if (1e-4..1e6).contains(&x.abs()) {
        let s = format!("{x:.10}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:.6e}")
    }
}

fn format_amp(a: &Amplitude) -> String {
    match (a[0] == 0.0, a[1] == 0.0) {
        (_, true) => format_number(a[0]),
        (true, false) => format!("{}i", format_number(a[1])),
        (false, false) => {
            let sign = if a[1] < 0.0 { '-' } else { '+' };
            format!("{}{}{}i", format_number(a[0]), sign, format_number(a[1].abs()))
        }
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_else(|| "undefined".into())
}

/// One line per nonzero component: `e2 |+-⟩  0.7071067812`.
fn write_vector(out: &mut String, indent: &str, v: &[Amplitude], labels: &[String]) {
    let rows: Vec<(String, String)> = v
        .iter()
        .enumerate()
        .filter(|(_, a)| a[0] != 0.0 || a[1] != 0.0)
        .map(|(k, a)| {
            let name = match labels.get(k) {
                Some(l) => format!("e{} {l}", k + 1),
                None => format!("e{}", k + 1),
            };
            (name, format_amp(a))
        })
        .collect();
    let width = rows.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
    for (n, a) in rows {
        let pad = width - n.chars().count();
        let _ = writeln!(out, "{indent}{n}{}  {a}", " ".repeat(pad));
    }
}

fn write_basis(out: &mut String, indent: &str, basis: &[Vec<Amplitude>], labels: &[String]) {
    if basis.is_empty() {
        let _ = writeln!(out, "{indent}(empty)");
    }
    for (i, v) in basis.iter().enumerate() {
        let _ = writeln!(out, "{indent}v{}:", i + 1);
        write_vector(out, &format!("{indent}  "), v, labels);
    }
}

/// Aligned `key  value` lines.
fn write_fields(out: &mut String, indent: &str, fields: &[(&str, String)]) {
    let width = fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in fields {
        let pad = width - k.chars().count();
        let _ = writeln!(out, "{indent}{k}{}  {v}", " ".repeat(pad));
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario   {}", r.scenario);
    let _ = writeln!(out, "seed       {}", r.seed);
    let _ = writeln!(out, "tolerance  abs {:e}, rel {:e}", r.tolerance.abs, r.tolerance.rel);
    let _ = writeln!(out, "queries    {}", r.queries.len());
    for q in &r.queries {
        let status = match (&q.outcome, &q.expectation) {
            (_, Some(e)) if !e.met => "FAIL",
            (_, Some(_)) => "ok",
            (Outcome::Error { .. }, None) => "ERROR",
            (Outcome::Ok { .. }, None) => "ok",
        };
        let _ = writeln!(out);
        let _ = writeln!(out, "[{}] {} ({})  {status}", q.index, q.display_label(), q.kind);
        match &q.outcome {
            Outcome::Error { kind, message } => {
                write_fields(&mut out, "  ", &[("error", kind.clone()), ("message", message.clone())]);
            }
            Outcome::Ok { result } => write_result(&mut out, result),
        }
        if let Some(e) = &q.expectation {
            for m in &e.mismatches {
                let _ = writeln!(out, "  mismatch: {m}");
            }
        }
    }
    out
}

fn write_result(out: &mut String, result: &QueryResult) {
    let ind = "  ";
    match result {
        QueryResult::Probability { probability } => {
            write_fields(out, ind, &[("probability", format_number(*probability))]);
        }
        QueryResult::Verdict {
            holds,
            degenerate,
            conditional_probability,
            residual,
        } => write_fields(
            out,
            ind,
            &[
                ("holds", holds.to_string()),
                ("degenerate", degenerate.to_string()),
                ("conditional probability", format_opt(*conditional_probability)),
                ("residual", format_number(*residual)),
            ],
        ),
        QueryResult::Space(s) => {
            let mut f = vec![
                ("feasible", s.feasible.to_string()),
                ("dimension", s.dimension.to_string()),
            ];
            if let Some(c) = s.complete {
                f.push(("complete", c.to_string()));
            }
            if let Some(c) = &s.certificate {
                f.push(("certificate", c.clone()));
            }
            write_fields(out, ind, &f);
            let _ = writeln!(out, "{ind}basis:");
            write_basis(out, "    ", &s.basis, &s.labels);
            if let Some(w) = &s.witness {
                let _ = writeln!(out, "{ind}witness:");
                write_vector(out, "    ", w, &s.labels);
            }
        }
        QueryResult::Symmetric { symmetric } => write_fields(out, ind, &[("symmetric", symmetric.to_string())]),
        QueryResult::Joint {
            complete,
            total_rank,
            blocks,
            labels,
        } => {
            write_fields(
                out,
                ind,
                &[
                    ("complete", complete.to_string()),
                    ("total rank", total_rank.to_string()),
                ],
            );
            for b in blocks {
                let _ = writeln!(out, "{ind}H{} dim {}:", ket(&[b.alpha, b.beta]), b.dimension);
                write_basis(out, "    ", &b.basis, labels);
            }
        }
        QueryResult::Correlation {
            value,
            opposite_residual,
            same_residual,
        } => write_fields(
            out,
            ind,
            &[
                ("⟨AB⟩", format_amp(value)),
                ("‖ABψ+ψ‖", format_number(*opposite_residual)),
                ("‖ABψ-ψ‖", format_number(*same_residual)),
            ],
        ),
        QueryResult::SharedOutcome(s) => {
            let mut f = vec![("beta", format_number(s.beta)), ("exclusive", s.exclusive.to_string())];
            f.push(("max reverse probability", format_opt(s.max_reverse_probability)));
            if let Some(x) = s.in_eigenspace {
                f.push(("in eigenspace", x.to_string()));
            }
            if let Some(x) = s.commutes_on_state {
                f.push(("commutes on state", x.to_string()));
            }
            f.push((
                "symmetric",
                s.symmetric.map(|x| x.to_string()).unwrap_or_else(|| "n/a".into()),
            ));
            write_fields(out, ind, &f);
            let mut rows = Vec::new();
            for x in &s.forward {
                rows.push((
                    format!("P(B={}|A={})", sign_char(s.beta), sign_char(x.alpha)),
                    format!("{}  holds {}", format_opt(x.probability), x.holds),
                ));
            }
            for x in &s.reverse {
                rows.push((
                    format!("P(A={}|B={})", sign_char(x.gamma), sign_char(s.beta)),
                    format_opt(x.probability),
                ));
            }
            for x in &s.exclusivity {
                rows.push((
                    format!("joint {} & {}", ket(&[x.alpha, x.beta]), ket(&[x.alpha, x.other_beta])),
                    if x.feasible {
                        "feasible".into()
                    } else {
                        "infeasible".into()
                    },
                ));
            }
            let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            for (k, v) in rows {
                let pad = width - k.chars().count();
                let _ = writeln!(out, "    {k}{}  {v}", " ".repeat(pad));
            }
        }
        QueryResult::Commutators {
            applicable,
            passes,
            premise_residuals,
            commutator_norm,
            vector_residual,
            expectation_residual,
            product_residual,
        } => write_fields(
            out,
            ind,
            &[
                ("applicable", applicable.to_string()),
                ("passes", passes.to_string()),
                (
                    "premise residuals",
                    format!(
                        "{}, {}",
                        format_number(premise_residuals[0]),
                        format_number(premise_residuals[1])
                    ),
                ),
                ("commutator norm", format_number(*commutator_norm)),
                ("vector residual", format_number(*vector_residual)),
                ("expectation residual", format_number(*expectation_residual)),
                ("product residual", format_number(*product_residual)),
            ],
        ),
        QueryResult::Covariance {
            passes,
            trials,
            invariant_trials,
        } => write_fields(
            out,
            ind,
            &[
                ("passes", passes.to_string()),
                ("invariant trials", format!("{invariant_trials}/{trials}")),
            ],
        ),
        QueryResult::FamilyInvariance {
            passes,
            trials,
            antisymmetric_passes,
            symmetric_failures,
        } => write_fields(
            out,
            ind,
            &[
                ("passes", passes.to_string()),
                ("antisymmetric passes", format!("{antisymmetric_passes}/{trials}")),
                ("symmetric failures", format!("{symmetric_failures}/{trials}")),
            ],
        ),
    }
}
