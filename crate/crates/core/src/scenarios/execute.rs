//! Runs the queries of a scenario and checks embedded expectations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conditioning::{self, Chain, MeasurementEvent};
use crate::numerics::random;
use crate::observables::values_match;
use crate::pcc::{self, derive_seed, Sign, ValueTriple};
use crate::{Config, Error, GammaSet, Observable, SubspaceBasis, Tolerance, C64};

use super::build::{matrix_value, Scenario};
use super::document::{vector_value, EventDoc, Expect, QueryKind};
use super::report::*;

/// Trials used by `covariance` and `family_invariance` when none are given.
pub const DEFAULT_TRIALS: usize = 20;

/// Per-run overrides of the scenario's tolerance and seed.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub tolerance: Option<Tolerance>,
    pub seed: Option<u64>,
}

/// Query-level failure: a library error or a malformed parameter.
struct QueryError {
    kind: String,
    message: String,
}

impl From<Error> for QueryError {
    fn from(e: Error) -> Self {
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

fn bad_query(message: impl Into<String>) -> QueryError {
    QueryError {
        kind: "InvalidQuery".into(),
        message: message.into(),
    }
}

type QResult<T> = std::result::Result<T, QueryError>;

pub fn execute(s: &Scenario, opts: RunOptions) -> Report {
    let tol = opts.tolerance.unwrap_or(s.tolerance);
    let seed = opts.seed.unwrap_or(s.seed);
    let queries = s
        .doc
        .queries
        .iter()
        .enumerate()
        .map(|(index, q)| {
            let cfg = Config::new(tol, derive_seed(seed, index as u64));
            let outcome = match run_query(s, &q.query, &cfg) {
                Ok(result) => Outcome::Ok { result },
                Err(e) => Outcome::Error {
                    kind: e.kind,
                    message: e.message,
                },
            };
            let expectation = q.expect.as_ref().map(|e| check_expectation(e, &outcome, &tol));
            QueryReport {
                index,
                label: q.label.clone(),
                kind: q.query.name().into(),
                seed: cfg.seed,
                outcome,
                expectation,
            }
        })
        .collect();
    Report {
        scenario: s.name().into(),
        seed,
        tolerance: ToleranceEcho {
            abs: tol.abs,
            rel: tol.rel,
        },
        queries,
    }
}

fn obs<'a>(s: &'a Scenario, name: &str) -> QResult<&'a Observable> {
    s.observable(name).map_err(|e| bad_query(e.to_string()))
}

fn event<'a>(s: &'a Scenario, e: &EventDoc) -> QResult<MeasurementEvent<'a, f64>> {
    Ok(MeasurementEvent::new(obs(s, &e.observable)?, e.value)?)
}

fn gamma_set(pairs: &[[f64; 2]]) -> QResult<GammaSet> {
    let t: Vec<(f64, f64)> = pairs.iter().map(|p| (p[0], p[1])).collect();
    Ok(GammaSet::from_tuples(&t)?)
}

/// Index of the eigenspace containing `e_k`, when there is one.
fn coordinate_value(o: &Observable, k: usize) -> Option<f64> {
    o.outcomes()
        .iter()
        .find(|out| (out.projector()[(k, k)].re - 1.0).abs() <= 1e-9)
        .map(|out| out.value())
}

/// Kets `|αβ…⟩` for every coordinate vector, or nothing when some `e_k`
/// is not a joint eigenvector.
fn coordinate_labels(os: &[&Observable]) -> Vec<String> {
    let dim = os[0].dim();
    let mut labels = Vec::with_capacity(dim);
    for k in 0..dim {
        let values: Option<Vec<f64>> = os.iter().map(|o| coordinate_value(o, k)).collect();
        match values {
            Some(v) => labels.push(ket(&v)),
            None => return Vec::new(),
        }
    }
    labels
}

fn run_query(s: &Scenario, q: &QueryKind, cfg: &Config) -> QResult<QueryResult> {
    let tol = &cfg.tol;
    let state = |name: &str| s.state(name).map_err(|e| bad_query(e.to_string()));
    Ok(match q {
        QueryKind::Born {
            observable,
            value,
            state: st,
        } => QueryResult::Probability {
            probability: conditioning::born(obs(s, observable)?, *value, state(st)?, tol)?,
        },
        QueryKind::Conditional {
            target,
            given,
            state: st,
        } => QueryResult::Probability {
            probability: conditioning::conditional(
                obs(s, &target.observable)?,
                target.value,
                obs(s, &given.observable)?,
                given.value,
                state(st)?,
                tol,
            )?,
        },
        QueryKind::Chain {
            given,
            target,
            state: st,
        } => {
            let events = given.iter().map(|e| event(s, e)).collect::<QResult<Vec<_>>>()?;
            let chain = Chain::new(events)?;
            QueryResult::Probability {
                probability: conditioning::chain_conditional(&chain, &event(s, target)?, state(st)?, tol)?,
            }
        }
        QueryKind::CheckPcc {
            a,
            alpha,
            b,
            beta,
            state: st,
        } => {
            let v = pcc::check_pcc(obs(s, a)?, *alpha, obs(s, b)?, *beta, state(st)?, tol)?;
            QueryResult::Verdict {
                holds: v.holds,
                degenerate: v.degenerate,
                conditional_probability: v.conditional_probability,
                residual: v.residual,
            }
        }
        QueryKind::SolvePair { a, alpha, b, beta } => {
            let (a, b) = (obs(s, a)?, obs(s, b)?);
            let sol = pcc::solve_pair(a, *alpha, b, *beta, cfg)?;
            QueryResult::Space(SpaceResult::from_space(&sol, None, coordinate_labels(&[a, b])))
        }
        QueryKind::SolveGamma { a, b, gamma, symmetric } => {
            let (a, b) = (obs(s, a)?, obs(s, b)?);
            let g = gamma_set(gamma)?;
            let sol = pcc::solve_gamma(a, b, &g, *symmetric, cfg)?;
            QueryResult::Space(SpaceResult::from_space(
                &sol,
                Some(g.is_complete(a, b)),
                coordinate_labels(&[a, b]),
            ))
        }
        QueryKind::Symmetric {
            a,
            alpha,
            b,
            beta,
            state: st,
        } => QueryResult::Symmetric {
            symmetric: pcc::is_symmetric_state(obs(s, a)?, *alpha, obs(s, b)?, *beta, state(st)?, tol)?,
        },
        QueryKind::JointEigenspaces { a, b } => {
            let (a, b) = (obs(s, a)?, obs(s, b)?);
            let d = pcc::joint_eigenspaces(a, b, tol)?;
            QueryResult::Joint {
                complete: d.is_complete(),
                total_rank: d.total_rank(),
                blocks: d
                    .blocks
                    .iter()
                    .map(|blk| BlockResult {
                        alpha: blk.alpha,
                        beta: blk.beta,
                        dimension: blk.basis.rank(),
                        basis: canonical_basis(&blk.basis),
                    })
                    .collect(),
                labels: coordinate_labels(&[a, b]),
            }
        }
        QueryKind::Characterize { a, b, sign } => {
            let (a, b) = (obs(s, a)?, obs(s, b)?);
            let sign = Sign::from_i64(*sign).ok_or_else(|| bad_query(format!("sign must be +1 or -1, got {sign}")))?;
            let sol = pcc::characterize_dichotomous(a, b, sign, cfg)?;
            QueryResult::Space(SpaceResult::from_space(&sol, Some(true), coordinate_labels(&[a, b])))
        }
        QueryKind::Correlation { a, b, state: st } => {
            let c = pcc::correlation(obs(s, a)?, obs(s, b)?, state(st)?)?;
            QueryResult::Correlation {
                value: amplitude(c.value),
                opposite_residual: c.opposite_residual,
                same_residual: c.same_residual,
            }
        }
        QueryKind::SharedOutcome {
            a,
            b,
            beta,
            state: st,
            dichotomous,
        } => {
            let r = pcc::shared_outcome_analysis(obs(s, a)?, obs(s, b)?, *beta, state(st)?, *dichotomous, cfg)?;
            QueryResult::SharedOutcome(SharedResult {
                beta: r.beta,
                exclusive: r.exclusive(),
                max_reverse_probability: r.max_reverse_probability(),
                exclusivity: r
                    .exclusivity
                    .iter()
                    .map(|x| ExclusivityResult {
                        alpha: x.alpha,
                        beta: x.beta,
                        other_beta: x.other_beta,
                        feasible: x.feasible,
                        certificate: x.certificate.as_ref().map(|c| c.describe()),
                    })
                    .collect(),
                forward: r
                    .forward
                    .iter()
                    .map(|(g, v)| ForwardResult {
                        alpha: *g,
                        holds: v.holds,
                        probability: v.conditional_probability,
                    })
                    .collect(),
                reverse: r
                    .reverse
                    .iter()
                    .map(|(g, p)| ReverseResult {
                        gamma: *g,
                        probability: *p,
                    })
                    .collect(),
                in_eigenspace: r.dichotomous.as_ref().map(|d| d.in_eigenspace),
                eigenstate_residual: r.dichotomous.as_ref().map(|d| d.eigenstate_residual),
                commutes_on_state: r.dichotomous.as_ref().map(|d| d.commutes_on_state),
                symmetric: r.dichotomous.as_ref().and_then(|d| d.symmetric()),
            })
        }
        QueryKind::Commutators {
            a1,
            a2,
            b1,
            b2,
            state: st,
        } => {
            let r = pcc::commutator_identities(obs(s, a1)?, obs(s, a2)?, obs(s, b1)?, obs(s, b2)?, state(st)?, tol)?;
            QueryResult::Commutators {
                applicable: r.applicable,
                passes: r.applicable && r.max_residual() <= tol.abs,
                premise_residuals: r.premise_residuals,
                commutator_norm: r.commutator_norm,
                vector_residual: r.vector_residual,
                expectation_residual: r.expectation_residual,
                product_residual: r.product_residual,
            }
        }
        QueryKind::Covariance {
            a,
            b,
            gamma,
            unitary,
            trials,
        } => {
            let (a, b) = (obs(s, a)?, obs(s, b)?);
            let g = gamma_set(gamma)?;
            let us = match unitary {
                Some(m) => {
                    if trials.is_some() {
                        return Err(bad_query("give either `unitary` or `trials`, not both"));
                    }
                    let u = matrix_value(m).map_err(bad_query)?;
                    u.ensure_unitary(tol)?;
                    vec![u]
                }
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    (0..trials.unwrap_or(DEFAULT_TRIALS))
                        .map(|_| random::unitary(a.dim(), &mut rng))
                        .collect()
                }
            };
            let mut invariant_trials = 0;
            for u in &us {
                if pcc::unitary_covariance_check(a, b, &g, u, cfg)? {
                    invariant_trials += 1;
                }
            }
            QueryResult::Covariance {
                passes: invariant_trials == us.len(),
                trials: us.len(),
                invariant_trials,
            }
        }
        QueryKind::FamilyInvariance { a, b, trials } => {
            let la = s.local(a).map_err(|e| bad_query(e.to_string()))?;
            let lb = s.local(b).map_err(|e| bad_query(e.to_string()))?;
            let r = pcc::family_invariance_check(la, lb, trials.unwrap_or(DEFAULT_TRIALS), cfg)?;
            QueryResult::FamilyInvariance {
                passes: r.invariant(),
                trials: r.trials.len(),
                antisymmetric_passes: r.antisymmetric_passes(),
                symmetric_failures: r.symmetric_failures(),
            }
        }
        QueryKind::SolveTriple {
            a,
            b,
            c,
            triples,
            joint,
        } => {
            let (a, b, c) = (obs(s, a)?, obs(s, b)?, obs(s, c)?);
            let t: Vec<ValueTriple<f64>> = triples.iter().map(|t| ValueTriple::new(t[0], t[1], t[2])).collect();
            let sol = pcc::solve_triple(a, b, c, &t, *joint, cfg)?;
            QueryResult::Space(SpaceResult::from_space(&sol, None, coordinate_labels(&[a, b, c])))
        }
    })
}

fn basis_from_amplitudes(dim: usize, vs: &[Vec<Amplitude>], tol: &Tolerance) -> Result<SubspaceBasis, String> {
    let vs: Vec<Vec<C64>> = vs
        .iter()
        .map(|v| v.iter().map(|a| C64::new(a[0], a[1])).collect())
        .collect();
    SubspaceBasis::span(dim, &vs, tol).map_err(|e| e.to_string())
}

/// Compares every present field of `e` against the outcome. Numbers match
/// within `tol.abs`; spans by mutual containment.
pub fn check_expectation(e: &Expect, outcome: &Outcome, tol: &Tolerance) -> ExpectationCheck {
    let mut mismatches = Vec::new();
    let result = match (outcome, &e.error) {
        (Outcome::Error { kind, .. }, Some(want)) => {
            if kind != want {
                mismatches.push(format!("error: expected {want}, got {kind}"));
            }
            None
        }
        (Outcome::Error { kind, message }, None) => {
            mismatches.push(format!("unexpected error {kind}: {message}"));
            None
        }
        (Outcome::Ok { .. }, Some(want)) => {
            mismatches.push(format!("error: expected {want}, query succeeded"));
            None
        }
        (Outcome::Ok { result }, None) => Some(result),
    };
    if let Some(r) = result {
        compare(e, r, tol, &mut mismatches);
    }
    ExpectationCheck {
        met: mismatches.is_empty(),
        mismatches,
    }
}

fn compare(e: &Expect, r: &QueryResult, tol: &Tolerance, out: &mut Vec<String>) {
    let close = |a: f64, b: f64| (a - b).abs() <= tol.abs;
    let mut flag = |name: &str, want: Option<bool>, got: Option<bool>| {
        if let Some(w) = want {
            match got {
                Some(g) if g == w => {}
                Some(g) => out.push(format!("{name}: expected {w}, got {g}")),
                None => out.push(format!("{name}: not reported by this query")),
            }
        }
    };
    let space = match r {
        QueryResult::Space(s) => Some(s),
        _ => None,
    };
    let shared = match r {
        QueryResult::SharedOutcome(s) => Some(s),
        _ => None,
    };
    flag("feasible", e.feasible, space.map(|s| s.feasible));
    flag(
        "holds",
        e.holds,
        match r {
            QueryResult::Verdict { holds, .. } => Some(*holds),
            _ => None,
        },
    );
    flag(
        "degenerate",
        e.degenerate,
        match r {
            QueryResult::Verdict { degenerate, .. } => Some(*degenerate),
            _ => None,
        },
    );
    flag(
        "symmetric",
        e.symmetric,
        match r {
            QueryResult::Symmetric { symmetric } => Some(*symmetric),
            QueryResult::SharedOutcome(s) => s.symmetric,
            _ => None,
        },
    );
    flag(
        "complete",
        e.complete,
        match r {
            QueryResult::Space(s) => s.complete,
            QueryResult::Joint { complete, .. } => Some(*complete),
            _ => None,
        },
    );
    flag("exclusive", e.exclusive, shared.map(|s| s.exclusive));
    flag("in_eigenspace", e.in_eigenspace, shared.and_then(|s| s.in_eigenspace));
    flag(
        "applicable",
        e.applicable,
        match r {
            QueryResult::Commutators { applicable, .. } => Some(*applicable),
            _ => None,
        },
    );
    flag(
        "passes",
        e.passes,
        match r {
            QueryResult::Commutators { passes, .. }
            | QueryResult::Covariance { passes, .. }
            | QueryResult::FamilyInvariance { passes, .. } => Some(*passes),
            _ => None,
        },
    );

    let mut number = |name: &str, want: Option<f64>, got: Option<Option<f64>>| {
        if let Some(w) = want {
            match got {
                Some(Some(g)) if close(g, w) => {}
                Some(Some(g)) => out.push(format!("{name}: expected {w}, got {g}")),
                Some(None) => out.push(format!("{name}: expected {w}, got undefined")),
                None => out.push(format!("{name}: not reported by this query")),
            }
        }
    };
    number(
        "probability",
        e.probability,
        match r {
            QueryResult::Probability { probability } => Some(Some(*probability)),
            QueryResult::Verdict {
                conditional_probability,
                ..
            } => Some(*conditional_probability),
            _ => None,
        },
    );
    number(
        "max_reverse_probability",
        e.max_reverse_probability,
        shared.map(|s| s.max_reverse_probability),
    );
    number(
        "correlation",
        e.correlation,
        match r {
            QueryResult::Correlation { value, .. } if value[1].abs() <= tol.abs => Some(Some(value[0])),
            QueryResult::Correlation { .. } => Some(None),
            _ => None,
        },
    );

    if let Some(w) = e.dimension {
        match space {
            Some(s) if s.dimension == w => {}
            Some(s) => out.push(format!("dimension: expected {w}, got {}", s.dimension)),
            None => out.push("dimension: not reported by this query".into()),
        }
    }
    if let Some(want) = &e.span {
        match space {
            None => out.push("span: not reported by this query".into()),
            Some(s) => match span_matches(want, s, tol) {
                Ok(true) => {}
                Ok(false) => out.push(format!(
                    "span: expected {} generators' span, got dimension {}",
                    want.len(),
                    s.dimension
                )),
                Err(m) => out.push(format!("span: {m}")),
            },
        }
    }
    if let Some(want) = &e.block_dims {
        match r {
            QueryResult::Joint { blocks, .. } => {
                for (alpha, beta, d) in want {
                    match blocks
                        .iter()
                        .find(|b| values_match(b.alpha, *alpha) && values_match(b.beta, *beta))
                    {
                        Some(b) if b.dimension == *d => {}
                        Some(b) => out.push(format!(
                            "block {}: expected dimension {d}, got {}",
                            ket(&[*alpha, *beta]),
                            b.dimension
                        )),
                        None => out.push(format!("block {}: missing", ket(&[*alpha, *beta]))),
                    }
                }
            }
            _ => out.push("block_dims: not reported by this query".into()),
        }
    }
}

fn span_matches(want: &[Vec<super::document::ComplexLit>], s: &SpaceResult, tol: &Tolerance) -> Result<bool, String> {
    let want: Vec<Vec<C64>> = want.iter().map(|v| vector_value(v)).collect::<Result<_, _>>()?;
    let dim = s.basis.first().map(Vec::len).or_else(|| want.first().map(Vec::len));
    let Some(dim) = dim else {
        return Ok(true);
    };
    if want.iter().any(|v| v.len() != dim) {
        return Err(format!("generators must have {dim} components"));
    }
    let expected = SubspaceBasis::span(dim, &want, tol).map_err(|e| e.to_string())?;
    let got = basis_from_amplitudes(dim, &s.basis, tol)?;
    Ok(expected.same_span(&got, tol))
}
