//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::process::ExitCode;

use pcc_core::conditioning::{born, chain_conditional, conditional, luders, Chain, MeasurementEvent};
use pcc_core::numerics::{kernel, random, rank, vector};
use pcc_core::pcc::{
    characterize_dichotomous, check_pcc, commutator_identities, correlation, family_invariance_check,
    joint_eigenspaces, shared_outcome_analysis, solve_gamma, solve_pair, solve_triple, unitary_covariance_check,
    Infeasibility, Sign, ValueTriple,
};
use pcc_core::scenarios::{execute, library, render_report, Format, RunOptions, Scenario};
use pcc_core::{CMatrix, Config, GammaSet, Observable, SolutionSpace, StateVector, SubspaceBasis, Tolerance, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg() -> Config {
    Config::default()
}

fn scenarios() -> BTreeMap<String, Scenario> {
    library().expect("built-in scenarios load")
}

fn obs<'a>(s: &'a BTreeMap<String, Scenario>, scenario: &str, name: &str) -> &'a Observable {
    &s[scenario].observables[name]
}

fn coord(dim: usize, one_based: &[usize]) -> SubspaceBasis {
    let idx: Vec<usize> = one_based.iter().map(|i| i - 1).collect();
    SubspaceBasis::coordinate(dim, &idx)
}

fn amb() -> GammaSet {
    GammaSet::from_tuples(&[(1.0, -1.0), (-1.0, 1.0)]).unwrap()
}

fn aeqb() -> GammaSet {
    GammaSet::from_tuples(&[(1.0, 1.0), (-1.0, -1.0)]).unwrap()
}

/// Largest of the two one-sided containment residuals.
fn mutual_residual(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    a.containment_residual(b).max(b.containment_residual(a))
}

fn expect_span(s: &SolutionSpace, want: &SubspaceBasis, what: &str) -> Result<f64, String> {
    ensure(s.feasible, || format!("{what}: infeasible"))?;
    ensure(s.dimension() == want.rank(), || {
        format!("{what}: dimension {} instead of {}", s.dimension(), want.rank())
    })?;
    let r = mutual_residual(&s.linear_basis, want);
    ensure(r <= TOL, || format!("{what}: containment residual {r:e}"))?;
    Ok(r)
}

fn criterion_1() -> Check {
    let lib = scenarios();
    let (a, b) = (obs(&lib, "dim5_AmB", "A"), obs(&lib, "dim5_AmB", "B"));
    let opposite = solve_gamma(a, b, &amb(), false, &cfg()).map_err(|e| e.to_string())?;
    ensure(!opposite.feasible, || "A=-B feasible".into())?;
    let same = solve_gamma(a, b, &aeqb(), false, &cfg()).map_err(|e| e.to_string())?;
    let r = expect_span(&same, &coord(5, &[1, 2, 4, 5]), "A=B")?;
    Ok(format!("A=-B infeasible, A=B = span{{e1,e2,e4,e5}} (residual {r:.1e})"))
}

fn criterion_2() -> Check {
    let lib = scenarios();
    let (a, b) = (obs(&lib, "dim4_AmB", "A"), obs(&lib, "dim4_AmB", "B"));
    let s = solve_gamma(a, b, &amb(), false, &cfg()).map_err(|e| e.to_string())?;
    expect_span(&s, &coord(4, &[2, 3]), "2/2 layout A=-B")?;
    let (a2, b2) = (obs(&lib, "dim4_split_AmB", "A"), obs(&lib, "dim4_split_AmB", "B"));
    let split = solve_gamma(a2, b2, &amb(), false, &cfg()).map_err(|e| e.to_string())?;
    ensure(!split.feasible, || "3/1 vs 1/3 layout A=-B feasible".into())?;
    let same = solve_gamma(a, b, &aeqb(), false, &cfg()).map_err(|e| e.to_string())?;
    expect_span(&same, &coord(4, &[1, 4]), "2/2 layout A=B")?;
    let split_same = solve_gamma(a2, b2, &aeqb(), false, &cfg()).map_err(|e| e.to_string())?;
    expect_span(&split_same, &coord(4, &[1, 4]), "3/1 vs 1/3 layout A=B")?;
    Ok("A=-B = span{e2,e3}; split layout infeasible; A=B = c1 e1 + c4 e4".into())
}

fn criterion_3() -> Check {
    let lib = scenarios();
    let (a, b) = (obs(&lib, "dim3_AmB", "A"), obs(&lib, "dim3_AmB", "B"));
    let tol = Tolerance::default();
    let s = solve_gamma(a, b, &amb(), false, &cfg()).map_err(|e| e.to_string())?;
    ensure(!s.feasible, || "A=-B feasible".into())?;
    let e2 = StateVector::basis(3, 1);
    let v = check_pcc(a, 1.0, b, -1.0, &e2, &tol).map_err(|e| e.to_string())?;
    ensure(v.holds, || format!("(A=+,B=-) on e2: {v:?}"))?;
    let d = check_pcc(a, -1.0, b, 1.0, &e2, &tol).map_err(|e| e.to_string())?;
    ensure(d.degenerate && !d.holds, || {
        format!("(A=-,B=+) on e2 not degenerate: {d:?}")
    })?;
    match conditional(b, 1.0, a, -1.0, &e2, &tol) {
        Err(pcc_core::Error::DegenerateCondition { .. }) => {}
        other => return Err(format!("P(B=+|A=-) on e2: {other:?}")),
    }
    let same = solve_gamma(a, b, &aeqb(), false, &cfg()).map_err(|e| e.to_string())?;
    expect_span(&same, &coord(3, &[1, 3]), "A=B")?;
    Ok("no A=-B states; e2 one-directional; (A=-,B=+) DegenerateCondition; A=B = span{e1,e3}".into())
}

fn criterion_4() -> Check {
    let lib = scenarios();
    let (a, b) = (obs(&lib, "dim2_AmB", "A"), obs(&lib, "dim2_AmB", "B"));
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tested = 0;
    while tested < 100 {
        let v: Vec<C64> = random::gaussian_vector(2, &mut rng);
        let psi = StateVector::normalized(v).unwrap();
        if psi.as_slice().iter().any(|c| c.norm() <= 1e-6) {
            continue;
        }
        for (alpha, beta) in [(1.0, -1.0), (-1.0, 1.0)] {
            let r = check_pcc(a, alpha, b, beta, &psi, &tol).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("({alpha},{beta}) fails on {:?}", psi.as_slice()))?;
        }
        tested += 1;
    }
    Ok(format!("{tested} seeded states pass A=-B"))
}

fn criterion_5() -> Check {
    let lib = scenarios();
    let s = &lib["dim4_rotated_noncommuting"];
    let (a, b) = (&s.observables["A"], &s.observables["B"]);
    let sol = solve_pair(a, 1.0, b, 1.0, &cfg()).map_err(|e| e.to_string())?;
    ensure(!sol.feasible, || "feasible".into())?;
    ensure(
        sol.certificate == Some(Infeasibility::ConstraintVanishes { index: 0 }),
        || format!("certificate {:?}", sol.certificate),
    )?;
    // the proof: the whole linear space sits inside ker E_A(+) = H_A(-)
    let minus = a.eigenspace(-1.0).unwrap();
    let r = minus.containment_residual(&sol.linear_basis);
    ensure(r <= TOL, || format!("linear space not inside H_A(-): {r:e}"))?;
    Ok(format!(
        "certified: linear space ⊂ ker E_A(+) (residual {r:.1e}), no sampling"
    ))
}

/// Commuting dichotomous pairs `(scenario, A, B)` of the library.
fn dichotomous_pairs(lib: &BTreeMap<String, Scenario>) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for (name, s) in lib {
        for (an, a) in &s.observables {
            for (bn, b) in &s.observables {
                if an != bn && a.is_dichotomous() && b.is_dichotomous() {
                    out.push((name.clone(), an.clone(), bn.clone()));
                }
            }
        }
    }
    out
}

fn criterion_6() -> Check {
    let lib = scenarios();
    let tol = Tolerance::default();
    let mut witnesses = 0;
    for (sname, an, bn) in dichotomous_pairs(&lib) {
        let (a, b) = (obs(&lib, &sname, &an), obs(&lib, &sname, &bn));
        for (sign, g) in [(-1.0, amb()), (1.0, aeqb())] {
            let s = solve_gamma(a, b, &g, false, &cfg()).map_err(|e| e.to_string())?;
            let Some(w) = &s.witness else { continue };
            witnesses += 1;
            let ctx = || format!("{sname} ({an},{bn}) sign {sign}");
            let c = correlation(a, b, w).map_err(|e| e.to_string())?;
            ensure((c.value - C64::new(sign, 0.0)).norm() <= TOL, || {
                format!("{}: <AB> = {}", ctx(), c.value)
            })?;
            let eig = if sign < 0.0 {
                c.opposite_residual
            } else {
                c.same_residual
            };
            ensure(eig <= TOL, || format!("{}: ‖ABψ ∓ ψ‖ = {eig:e}", ctx()))?;
            for p in g.pairs() {
                let pa = born(a, p.alpha, w, &tol).map_err(|e| e.to_string())?;
                let pb = born(b, p.beta, w, &tol).map_err(|e| e.to_string())?;
                ensure((pa - pb).abs() <= TOL, || format!("{}: born {pa} vs {pb}", ctx()))?;
            }
        }
    }
    ensure(witnesses > 0, || "no feasible witness found".into())?;
    Ok(format!(
        "{witnesses} witnesses satisfy <AB> = ±1, ABψ = ±ψ and the Born equalities"
    ))
}

fn criterion_7() -> Check {
    let lib = scenarios();
    let mut checked = 0;
    for (sname, an, bn) in dichotomous_pairs(&lib) {
        let (a, b) = (obs(&lib, &sname, &an), obs(&lib, &sname, &bn));
        if !a.commutes(b, &Tolerance::default()).map_err(|e| e.to_string())? {
            continue;
        }
        let ctx = || format!("{sname} ({an},{bn})");
        let d = joint_eigenspaces(a, b, &Tolerance::default()).map_err(|e| e.to_string())?;
        ensure(d.total_rank() == a.dim(), || {
            format!("{}: total rank {}", ctx(), d.total_rank())
        })?;
        for sign in [Sign::Same, Sign::Opposite] {
            let c = characterize_dichotomous(a, b, sign, &cfg()).map_err(|e| e.to_string())?;
            let g = solve_gamma(a, b, &sign.gamma(), false, &cfg()).map_err(|e| e.to_string())?;
            ensure(c.feasible == g.feasible, || {
                format!("{}: feasibility differs for {sign:?}", ctx())
            })?;
            let r = mutual_residual(&c.linear_basis, &g.linear_basis);
            ensure(c.dimension() == g.dimension() && r <= TOL, || {
                format!("{}: subspaces differ for {sign:?} (residual {r:e})", ctx())
            })?;
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} commuting pairs: complete decomposition, characterization = solver"
    ))
}

fn criterion_8() -> Check {
    let lib = scenarios();
    let s = &lib["dim4_shared_outcome"];
    let (a, b) = (&s.observables["A"], &s.observables["B"]);
    let psi = &s.states["psi"];
    let r = shared_outcome_analysis(a, b, 1.0, psi, true, &cfg()).map_err(|e| e.to_string())?;
    for (g, v) in &r.forward {
        let p = v.conditional_probability.unwrap_or(f64::NAN);
        ensure(v.holds && (p - 1.0).abs() <= TOL, || format!("P(B=+|A={g}) = {p}"))?;
    }
    let max = r.max_reverse_probability().ok_or("reverse probabilities undefined")?;
    ensure(max <= 1.0 - 0.4, || format!("max reverse probability {max}"))?;
    ensure((max - 0.5).abs() <= TOL, || {
        format!("max reverse probability {max} instead of 0.5")
    })?;
    for x in &r.exclusivity {
        ensure(
            !x.feasible
                && matches!(
                    x.certificate,
                    Some(Infeasibility::ConstraintVanishes { .. } | Infeasibility::EmptyLinearSpace)
                ),
            || {
                format!(
                    "joint ({},{})/({},{}) not certified infeasible: {:?}",
                    x.alpha, x.beta, x.alpha, x.other_beta, x.certificate
                )
            },
        )?;
    }
    Ok(format!(
        "forward probabilities 1, max reverse {max}, joint systems certified infeasible"
    ))
}

fn criterion_9() -> Check {
    let lib = scenarios();
    let s = &lib["tensor_commutators"];
    let o = |n: &str| &s.observables[n];
    let r = commutator_identities(
        o("A1"),
        o("A2"),
        o("B1"),
        o("B2"),
        &s.states["singlet"],
        &Tolerance::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(r.applicable, || format!("premises violated: {:?}", r.premise_residuals))?;
    ensure(r.commutator_norm > 1.0, || "commutator vanishes on the state".into())?;
    ensure(r.max_residual() <= TOL, || format!("{r:?}"))?;
    Ok(format!(
        "vector {:.1e}, expectation {:.1e}, product {:.1e}",
        r.vector_residual, r.expectation_residual, r.product_residual
    ))
}

fn criterion_10() -> Check {
    let lib = scenarios();
    let s = &lib["tensor_singlet_family"];
    let r = family_invariance_check(&s.locals["a"], &s.locals["b"], 20, &cfg()).map_err(|e| e.to_string())?;
    ensure(r.antisymmetric_passes() == 20, || {
        format!("antisymmetric {}/20", r.antisymmetric_passes())
    })?;
    ensure(r.symmetric_failures() >= 1, || "symmetric control never fails".into())?;
    Ok(format!(
        "antisymmetric 20/20, symmetric control fails {}/20",
        r.symmetric_failures()
    ))
}

fn criterion_11() -> Check {
    let lib = scenarios();
    let s = &lib["ghz_triple"];
    let o = |n: &str| &s.observables[n];
    let triples = [ValueTriple::new(1.0, 1.0, 1.0), ValueTriple::new(-1.0, -1.0, -1.0)];
    let sol = solve_triple(o("A"), o("B"), o("C"), &triples, true, &cfg()).map_err(|e| e.to_string())?;
    expect_span(&sol, &coord(8, &[1, 8]), "joint triples")?;
    let w = sol.witness.as_ref().ok_or("no witness")?;
    let tol = Tolerance::default();
    let chain = Chain::new(vec![
        MeasurementEvent::new(o("A"), 1.0).unwrap(),
        MeasurementEvent::new(o("B"), 1.0).unwrap(),
    ])
    .unwrap();
    let p =
        chain_conditional(&chain, &MeasurementEvent::new(o("C"), 1.0).unwrap(), w, &tol).map_err(|e| e.to_string())?;
    ensure((p - 1.0).abs() <= TOL, || format!("P(C=+|A=+,B=+) = {p}"))?;
    Ok(format!("span{{|+++⟩,|---⟩}}, P(C=+|A=+,B=+) on witness = {p}"))
}

fn criterion_12() -> Check {
    let lib = scenarios();
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);

    // conditioning normalization and Lüders idempotence
    let mut conditionals = 0;
    for s in lib.values() {
        for _ in 0..5 {
            let psi = StateVector::normalized(random::gaussian_vector(s.dim, &mut rng)).unwrap();
            for a in s.observables.values() {
                for alpha in a.values() {
                    let post = luders(a, alpha, &psi, &tol).map_err(|e| e.to_string())?;
                    let again = luders(a, alpha, &post, &tol).map_err(|e| e.to_string())?;
                    let d = vector::norm(&vector::sub(post.as_slice(), again.as_slice()));
                    ensure(d <= TOL, || format!("{}: Lüders not idempotent ({d:e})", s.name()))?;
                    for b in s.observables.values() {
                        let total: f64 = b
                            .values()
                            .into_iter()
                            .map(|beta| conditional(b, beta, a, alpha, &psi, &tol))
                            .sum::<Result<f64, _>>()
                            .map_err(|e| e.to_string())?;
                        ensure((total - 1.0).abs() <= TOL, || format!("{}: Σ_β P = {total}", s.name()))?;
                        conditionals += 1;
                    }
                }
            }
        }
    }

    // unitary covariance, 20 seeded unitaries per scenario
    let mut covariance = 0;
    for s in lib.values() {
        let mut urng = ChaCha8Rng::seed_from_u64(pcc_core::pcc::derive_seed(12, s.dim as u64));
        let us: Vec<CMatrix> = (0..20).map(|_| random::unitary(s.dim, &mut urng)).collect();
        let names: Vec<&String> = s.observables.keys().collect();
        let (a, b) = (&s.observables[names[0]], &s.observables[names[1.min(names.len() - 1)]]);
        for g in [amb(), aeqb()] {
            for u in &us {
                let ok = unitary_covariance_check(a, b, &g, u, &cfg()).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{}: covariance fails", s.name()))?;
                covariance += 1;
            }
        }
    }

    // kernel/rank duality on random low-rank products
    for n in 1..=8 {
        for r in 0..=n {
            let m = if r == 0 {
                CMatrix::zeros(n + 1, n)
            } else {
                let left: CMatrix = random::ginibre(n + 1, r, &mut rng);
                left.matmul(&random::ginibre(r, n, &mut rng))
            };
            let rk = rank(&m, &tol).map_err(|e| e.to_string())?;
            let ker = kernel(&m, &tol).map_err(|e| e.to_string())?;
            ensure(rk == r && rk + ker.rank() == n, || {
                format!("n={n} r={r}: rank {rk}, nullity {}", ker.rank())
            })?;
            for v in ker.vectors() {
                let res = vector::norm(&m.apply(v));
                ensure(res <= TOL * m.frobenius().max(1.0), || {
                    format!("kernel vector residual {res:e}")
                })?;
            }
        }
    }

    // determinism
    for s in lib.values() {
        let once = render_report(&execute(s, RunOptions::default()), Format::Json);
        let twice = render_report(&execute(s, RunOptions::default()), Format::Json);
        ensure(once == twice, || format!("{}: reports differ between runs", s.name()))?;
    }
    Ok(format!(
        "{conditionals} normalizations, {covariance} covariance trials, kernel/rank, determinism"
    ))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("dim-5 layout", criterion_1),
        ("dim-4 layouts", criterion_2),
        ("dim-3 one-directional PCC", criterion_3),
        ("dim-2 random states", criterion_4),
        ("rotated non-commuting pair", criterion_5),
        ("correlation identities", criterion_6),
        ("joint decomposition and characterization", criterion_7),
        ("shared outcome", criterion_8),
        ("commutator identities", criterion_9),
        ("family invariance", criterion_10),
        ("GHZ triples", criterion_11),
        ("property suites", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
