//! Validation of a parsed document into ready-to-run observables and states.

use std::collections::BTreeMap;

use crate::{CMatrix, Observable, StateVector, Tolerance, C64};

use super::document::{vector_value, ComplexLit, EventDoc, ObservableDoc, QueryKind, ScenarioDoc};
use super::ScenarioError;

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    pub dim: usize,
    pub factors: Option<Vec<usize>>,
    pub locals: BTreeMap<String, Observable>,
    pub observables: BTreeMap<String, Observable>,
    pub states: BTreeMap<String, StateVector>,
    pub tolerance: Tolerance,
    pub seed: u64,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.doc.name
    }

    pub fn observable(&self, name: &str) -> Result<&Observable, ScenarioError> {
        self.observables
            .get(name)
            .ok_or_else(|| invalid("query".into(), format!("unknown observable '{name}'")))
    }

    pub fn local(&self, name: &str) -> Result<&Observable, ScenarioError> {
        self.locals
            .get(name)
            .ok_or_else(|| invalid("query".into(), format!("unknown local observable '{name}'")))
    }

    pub fn state(&self, name: &str) -> Result<&StateVector, ScenarioError> {
        self.states
            .get(name)
            .ok_or_else(|| invalid("query".into(), format!("unknown state '{name}'")))
    }
}

fn invalid(context: String, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation {
        context,
        message: message.into(),
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build_scenario(doc)
}

pub fn build_scenario(doc: ScenarioDoc) -> Result<Scenario, ScenarioError> {
    let tolerance = match doc.tolerance {
        Some(t) => Tolerance::new(t.abs, t.rel).map_err(|e| invalid("tolerance".into(), e.to_string()))?,
        None => Tolerance::default(),
    };
    let (dim, factors) = match (doc.dimension, &doc.factors) {
        (Some(d), None) if d > 0 => (d, None),
        (None, Some(f)) if !f.is_empty() && f.iter().all(|&d| d > 0) => (f.iter().product(), Some(f.clone())),
        (Some(d), Some(f)) if !f.is_empty() && f.iter().product::<usize>() == d => (d, Some(f.clone())),
        _ => {
            return Err(invalid(
                "document".into(),
                "exactly one consistent positive `dimension` or `factors` is required",
            ))
        }
    };

    let mut locals = BTreeMap::new();
    for (name, o) in &doc.locals {
        let ctx = format!("local observable '{name}'");
        let obs = match o {
            ObservableDoc::Local { .. } => return Err(invalid(ctx, "local observables cannot be lifted")),
            other => build_plain(other, None, &tolerance).map_err(|m| invalid(ctx, m))?,
        };
        locals.insert(name.clone(), obs);
    }

    let mut observables = BTreeMap::new();
    for (name, o) in &doc.observables {
        let ctx = format!("observable '{name}'");
        let obs = match o {
            ObservableDoc::Local { local, slot } => {
                let f = factors
                    .as_ref()
                    .ok_or_else(|| invalid(ctx.clone(), "`local` observables need `factors`"))?;
                let base = locals
                    .get(local)
                    .ok_or_else(|| invalid(ctx.clone(), format!("unknown local observable '{local}'")))?;
                base.lift_local(*slot, f)
                    .map_err(|e| invalid(ctx.clone(), e.to_string()))?
            }
            other => build_plain(other, Some(dim), &tolerance).map_err(|m| invalid(ctx, m))?,
        };
        observables.insert(name.clone(), obs);
    }

    let mut states = BTreeMap::new();
    for (name, coeffs) in &doc.states {
        let ctx = format!("state '{name}'");
        let v = vector_value(coeffs).map_err(|m| invalid(ctx.clone(), m))?;
        if v.len() != dim {
            return Err(invalid(ctx, format!("has {} coefficients, expected {dim}", v.len())));
        }
        let psi = StateVector::normalized(v).map_err(|e| invalid(ctx, e.to_string()))?;
        states.insert(name.clone(), psi);
    }

    let scenario = Scenario {
        seed: doc.seed.unwrap_or(crate::pcc::Config::<f64>::DEFAULT_SEED),
        doc,
        dim,
        factors,
        locals,
        observables,
        states,
        tolerance,
    };
    for (i, q) in scenario.doc.queries.iter().enumerate() {
        check_references(&scenario, &q.query).map_err(|m| invalid(format!("query {}", i + 1), m))?;
    }
    Ok(scenario)
}

fn build_plain(o: &ObservableDoc, dim: Option<usize>, tol: &Tolerance) -> Result<Observable, String> {
    let obs = match o {
        ObservableDoc::Eigenspaces {
            eigenvalues,
            eigenspaces,
        } => {
            if eigenvalues.len() != eigenspaces.len() {
                return Err(format!(
                    "{} eigenvalues but {} eigenspaces",
                    eigenvalues.len(),
                    eigenspaces.len()
                ));
            }
            let mut groups = Vec::with_capacity(eigenvalues.len());
            for (value, vectors) in eigenvalues.iter().zip(eigenspaces) {
                let vs = vectors.iter().map(|v| vector_value(v)).collect::<Result<Vec<_>, _>>()?;
                if let (Some(d), Some(bad)) = (dim, vs.iter().find(|v| Some(v.len()) != dim)) {
                    return Err(format!("eigenvector of length {} in dimension {d}", bad.len()));
                }
                groups.push((value.value()?, vs));
            }
            Observable::from_eigenspaces(&groups, tol).map_err(|e| e.to_string())?
        }
        ObservableDoc::Matrix { matrix } => {
            let m = matrix_value(matrix)?;
            if let Some(d) = dim {
                if m.rows() != d {
                    return Err(format!("matrix has {} rows in dimension {d}", m.rows()));
                }
            }
            Observable::from_matrix(&m, tol).map_err(|e| e.to_string())?
        }
        ObservableDoc::Local { .. } => unreachable!("handled by the caller"),
    };
    Ok(obs)
}

pub(crate) fn matrix_value(rows: &[Vec<ComplexLit>]) -> Result<CMatrix, String> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| vector_value(r)).collect::<Result<_, _>>()?;
    CMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

fn check_references(s: &Scenario, q: &QueryKind) -> Result<(), String> {
    let obs = |n: &str| {
        s.observables
            .contains_key(n)
            .then_some(())
            .ok_or_else(|| format!("unknown observable '{n}'"))
    };
    let local = |n: &str| {
        s.locals
            .contains_key(n)
            .then_some(())
            .ok_or_else(|| format!("unknown local observable '{n}'"))
    };
    let state = |n: &str| {
        s.states
            .contains_key(n)
            .then_some(())
            .ok_or_else(|| format!("unknown state '{n}'"))
    };
    let event = |e: &EventDoc| obs(&e.observable);
    match q {
        QueryKind::Born {
            observable, state: st, ..
        } => {
            obs(observable)?;
            state(st)
        }
        QueryKind::Conditional {
            target,
            given,
            state: st,
        } => {
            event(target)?;
            event(given)?;
            state(st)
        }
        QueryKind::Chain {
            given,
            target,
            state: st,
        } => {
            if given.is_empty() {
                return Err("chain needs at least one conditioning event".into());
            }
            given.iter().try_for_each(event)?;
            event(target)?;
            state(st)
        }
        QueryKind::CheckPcc { a, b, state: st, .. }
        | QueryKind::Symmetric { a, b, state: st, .. }
        | QueryKind::Correlation { a, b, state: st }
        | QueryKind::SharedOutcome { a, b, state: st, .. } => {
            obs(a)?;
            obs(b)?;
            state(st)
        }
        QueryKind::SolvePair { a, b, .. }
        | QueryKind::SolveGamma { a, b, .. }
        | QueryKind::JointEigenspaces { a, b }
        | QueryKind::Characterize { a, b, .. }
        | QueryKind::Covariance { a, b, .. } => {
            obs(a)?;
            obs(b)
        }
        QueryKind::Commutators {
            a1,
            a2,
            b1,
            b2,
            state: st,
        } => {
            [a1, a2, b1, b2].into_iter().try_for_each(|n| obs(n))?;
            state(st)
        }
        QueryKind::FamilyInvariance { a, b, .. } => {
            local(a)?;
            local(b)
        }
        QueryKind::SolveTriple { a, b, c, .. } => {
            obs(a)?;
            obs(b)?;
            obs(c)
        }
    }
}
