//! Serialized form of a scenario document.
//!
//! Maps are `BTreeMap`s so that canonical rendering is independent of the
//! input key order. Complex literals accept a bare real or a `[re, im]`
//! pair, each component either a JSON number or a decimal string; decimal
//! strings are kept verbatim on re-rendering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::C64;

/// Real number written as a JSON number or as a decimal string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Text(s) => s
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("'{s}' is not a finite decimal number")),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Number(x)
    }
}

/// Complex literal: `1`, `"0.5"`, `[0, 1]`, `["0.6", "-0.8"]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexLit {
    Real(Scalar),
    Pair([Scalar; 2]),
}

impl ComplexLit {
    pub fn value(&self) -> Result<C64, String> {
        match self {
            ComplexLit::Real(r) => Ok(C64::new(r.value()?, 0.0)),
            ComplexLit::Pair([re, im]) => Ok(C64::new(re.value()?, im.value()?)),
        }
    }
}

impl From<f64> for ComplexLit {
    fn from(x: f64) -> Self {
        ComplexLit::Real(Scalar::Number(x))
    }
}

pub fn vector_value(v: &[ComplexLit]) -> Result<Vec<C64>, String> {
    v.iter().map(ComplexLit::value).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDoc {
    pub abs: f64,
    pub rel: f64,
}

/// Observable in eigenspace, matrix or lifted-local form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableDoc {
    Eigenspaces {
        eigenvalues: Vec<Scalar>,
        eigenspaces: Vec<Vec<Vec<ComplexLit>>>,
    },
    Matrix {
        matrix: Vec<Vec<ComplexLit>>,
    },
    Local {
        local: String,
        slot: usize,
    },
}

/// Outcome `value` of observable `observable`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDoc {
    pub observable: String,
    pub value: f64,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QueryKind {
    Born {
        observable: String,
        value: f64,
        state: String,
    },
    Conditional {
        target: EventDoc,
        given: EventDoc,
        state: String,
    },
    Chain {
        given: Vec<EventDoc>,
        target: EventDoc,
        state: String,
    },
    CheckPcc {
        a: String,
        alpha: f64,
        b: String,
        beta: f64,
        state: String,
    },
    SolvePair {
        a: String,
        alpha: f64,
        b: String,
        beta: f64,
    },
    SolveGamma {
        a: String,
        b: String,
        gamma: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "is_false")]
        symmetric: bool,
    },
    Symmetric {
        a: String,
        alpha: f64,
        b: String,
        beta: f64,
        state: String,
    },
    JointEigenspaces {
        a: String,
        b: String,
    },
    Characterize {
        a: String,
        b: String,
        sign: i64,
    },
    Correlation {
        a: String,
        b: String,
        state: String,
    },
    SharedOutcome {
        a: String,
        b: String,
        beta: f64,
        state: String,
        #[serde(default = "default_true", skip_serializing_if = "is_true")]
        dichotomous: bool,
    },
    Commutators {
        a1: String,
        a2: String,
        b1: String,
        b2: String,
        state: String,
    },
    Covariance {
        a: String,
        b: String,
        gamma: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unitary: Option<Vec<Vec<ComplexLit>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trials: Option<usize>,
    },
    FamilyInvariance {
        a: String,
        b: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trials: Option<usize>,
    },
    SolveTriple {
        a: String,
        b: String,
        c: String,
        triples: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "is_false")]
        joint: bool,
    },
}

impl QueryKind {
    pub fn name(&self) -> &'static str {
        match self {
            QueryKind::Born { .. } => "born",
            QueryKind::Conditional { .. } => "conditional",
            QueryKind::Chain { .. } => "chain",
            QueryKind::CheckPcc { .. } => "check_pcc",
            QueryKind::SolvePair { .. } => "solve_pair",
            QueryKind::SolveGamma { .. } => "solve_gamma",
            QueryKind::Symmetric { .. } => "symmetric",
            QueryKind::JointEigenspaces { .. } => "joint_eigenspaces",
            QueryKind::Characterize { .. } => "characterize",
            QueryKind::Correlation { .. } => "correlation",
            QueryKind::SharedOutcome { .. } => "shared_outcome",
            QueryKind::Commutators { .. } => "commutators",
            QueryKind::Covariance { .. } => "covariance",
            QueryKind::FamilyInvariance { .. } => "family_invariance",
            QueryKind::SolveTriple { .. } => "solve_triple",
        }
    }
}

/// Expected outcome annotations. Every present field is checked; absent
/// fields are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    /// Error kind the query must fail with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probability: Option<f64>,
    /// Largest reversed-order probability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_reverse_probability: Option<f64>,
    /// Generators of the expected solution space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Vec<Vec<ComplexLit>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_eigenspace: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub applicable: Option<bool>,
    /// Overall pass of identity, covariance and invariance checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passes: Option<bool>,
    /// `[α, β, dim H_AB(α, β)]` per joint block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_dims: Option<Vec<(f64, f64, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub query: QueryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expect>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
    /// Observables on single tensor factors, referenced by `local` entries
    /// and by `family_invariance` queries.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub locals: BTreeMap<String, ObservableDoc>,
    pub observables: BTreeMap<String, ObservableDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, Vec<ComplexLit>>,
    #[serde(default)]
    pub queries: Vec<QueryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Canonical text of a document: pretty JSON with a trailing newline.
pub fn render_document(doc: &ScenarioDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("scenario documents always serialize");
    s.push('\n');
    s
}
