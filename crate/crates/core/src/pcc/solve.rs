//! PCC verdicts and the linear solvers for pairs, Γ-sets and triples.

use crate::error::{Error, Result};
use crate::numerics::{kernel, vector, CMatrix, StateVector, Tolerance};
use crate::observables::{GammaSet, Observable};
use crate::scalar::Real;

use super::{value_label, Config, Constraint, PccVerdict, SolutionSpace};

fn same_dims<T: Real>(obs: &[&Observable<T>]) -> Result<usize> {
    let dim = obs[0].dim();
    for o in &obs[1..] {
        o.ensure_dim(dim)?;
    }
    Ok(dim)
}

/// Tests `P(B = β | A = α, ψ) = 1`, measuring `A` first. Degenerate
/// conditions (`E_A(α) ψ ≈ 0`) give `holds = false, degenerate = true`.
pub fn check_pcc<T: Real>(
    a: &Observable<T>,
    alpha: T,
    b: &Observable<T>,
    beta: T,
    psi: &StateVector<T>,
    tol: &Tolerance<T>,
) -> Result<PccVerdict<T>> {
    let dim = same_dims(&[a, b])?;
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.dim(),
        });
    }
    let ea = a.projector(alpha)?.apply(psi.as_slice());
    let eba = b.projector(beta)?.apply(&ea);
    let residual = vector::norm(&vector::sub(&eba, &ea));
    let den = vector::norm_sqr(&ea);
    if den < T::degeneracy_threshold() {
        return Ok(PccVerdict {
            holds: false,
            conditional_probability: None,
            residual,
            degenerate: true,
        });
    }
    let p = (vector::norm_sqr(&eba) / den).min(T::one());
    Ok(PccVerdict {
        holds: T::one() - p <= tol.abs,
        conditional_probability: Some(p),
        residual,
        degenerate: false,
    })
}

/// `(I - E_B(β)) E_A(α)`
fn pair_operator<T: Real>(a: &Observable<T>, alpha: T, b: &Observable<T>, beta: T) -> Result<CMatrix<T>> {
    let ea = a.projector(alpha)?;
    let eb = b.projector(beta)?;
    Ok(&ea.clone() - &eb.matmul(ea))
}

fn solve_stacked<T: Real>(
    dim: usize,
    blocks: Vec<CMatrix<T>>,
    constraints: Vec<Constraint<T>>,
    cfg: &Config<T>,
) -> Result<SolutionSpace<T>> {
    let stacked = if blocks.is_empty() {
        CMatrix::zeros(1, dim)
    } else {
        CMatrix::vstack(&blocks)?
    };
    let basis = kernel(&stacked, &cfg.tol)?;
    Ok(SolutionSpace::assemble(basis, constraints, cfg))
}

/// All states that are PCC for `(A = α, B = β)`.
pub fn solve_pair<T: Real>(
    a: &Observable<T>,
    alpha: T,
    b: &Observable<T>,
    beta: T,
    cfg: &Config<T>,
) -> Result<SolutionSpace<T>> {
    let dim = same_dims(&[a, b])?;
    let op = pair_operator(a, alpha, b, beta)?;
    let constraint = Constraint::new(format!("E_A({})ψ ≠ 0", value_label(alpha)), a.projector(alpha)?.clone());
    solve_stacked(dim, vec![op], vec![constraint], cfg)
}

/// All states PCC for every pair of `gamma`. With `symmetric`, both
/// measurement orders are imposed for every pair.
pub fn solve_gamma<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    gamma: &GammaSet<T>,
    symmetric: bool,
    cfg: &Config<T>,
) -> Result<SolutionSpace<T>> {
    let dim = same_dims(&[a, b])?;
    gamma.validate(a, b)?;
    let mut blocks = Vec::new();
    let mut constraints = Vec::new();
    for p in gamma.pairs() {
        blocks.push(pair_operator(a, p.alpha, b, p.beta)?);
        constraints.push(Constraint::new(
            format!("E_A({})ψ ≠ 0", value_label(p.alpha)),
            a.projector(p.alpha)?.clone(),
        ));
        if symmetric {
            blocks.push(pair_operator(b, p.beta, a, p.alpha)?);
            constraints.push(Constraint::new(
                format!("E_B({})ψ ≠ 0", value_label(p.beta)),
                b.projector(p.beta)?.clone(),
            ));
        }
    }
    solve_stacked(dim, blocks, constraints, cfg)
}

/// Outcome triple `(α, β, γ)` for `A`, `B`, `C` measured in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueTriple<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T> ValueTriple<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Self {
        Self { alpha, beta, gamma }
    }
}

/// States for which observing `A = α` then `B = β` forces `C = γ`, for
/// every listed triple. In joint mode the projector products must agree
/// in all cyclic orders: `E_B E_A ψ = E_C E_B ψ = E_A E_C ψ`.
pub fn solve_triple<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    c: &Observable<T>,
    triples: &[ValueTriple<T>],
    joint: bool,
    cfg: &Config<T>,
) -> Result<SolutionSpace<T>> {
    let dim = same_dims(&[a, b, c])?;
    if joint {
        a.ensure_commutes(b, &cfg.tol)?;
        b.ensure_commutes(c, &cfg.tol)?;
        a.ensure_commutes(c, &cfg.tol)?;
    }
    let mut blocks = Vec::new();
    let mut constraints = Vec::new();
    for t in triples {
        let ea = a.projector(t.alpha)?;
        let eb = b.projector(t.beta)?;
        let ec = c.projector(t.gamma)?;
        let ba = eb.matmul(ea);
        blocks.push(&ba - &ec.matmul(&ba));
        if joint {
            let cb = ec.matmul(eb);
            let ac = ea.matmul(ec);
            blocks.push(&ba - &cb);
            blocks.push(&cb - &ac);
        }
        constraints.push(Constraint::new(
            format!("E_B({})E_A({})ψ ≠ 0", value_label(t.beta), value_label(t.alpha)),
            ba,
        ));
    }
    solve_stacked(dim, blocks, constraints, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{random, SubspaceBasis};
    use crate::pcc::Infeasibility;
    use num_complex::Complex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> Config<f64> {
        Config::default()
    }

    fn e(n: usize, i: usize) -> Vec<Complex<f64>> {
        StateVector::<f64>::basis(n, i).into_inner()
    }

    fn obs(dim: usize, plus: &[usize], minus: &[usize]) -> Observable<f64> {
        Observable::from_eigenspaces(
            &[
                (1.0, plus.iter().map(|&i| e(dim, i)).collect()),
                (-1.0, minus.iter().map(|&i| e(dim, i)).collect()),
            ],
            &cfg().tol,
        )
        .unwrap()
    }

    fn gamma(p: &[(f64, f64)]) -> GammaSet<f64> {
        GammaSet::from_tuples(p).unwrap()
    }

    fn anti() -> GammaSet<f64> {
        gamma(&[(1.0, -1.0), (-1.0, 1.0)])
    }

    fn same() -> GammaSet<f64> {
        gamma(&[(1.0, 1.0), (-1.0, -1.0)])
    }

    fn assert_span(s: &SolutionSpace<f64>, idx: &[usize]) {
        let expected = SubspaceBasis::coordinate(s.linear_basis.dim(), idx);
        assert!(
            s.linear_basis.same_span(&expected, &cfg().tol),
            "got rank {}",
            s.dimension()
        );
    }

    #[test]
    fn dim5_layouts() {
        let a = obs(5, &[0, 1, 2], &[3, 4]);
        let b = obs(5, &[0, 1], &[2, 3, 4]);
        let s = solve_gamma(&a, &b, &anti(), false, &cfg()).unwrap();
        assert!(!s.feasible);
        let s = solve_gamma(&a, &b, &same(), false, &cfg()).unwrap();
        assert!(s.feasible);
        assert_span(&s, &[0, 1, 3, 4]);
    }

    #[test]
    fn dim4_anti_solution() {
        let a = obs(4, &[0, 1], &[2, 3]);
        let b = obs(4, &[0, 2], &[1, 3]);
        let s = solve_gamma(&a, &b, &anti(), false, &cfg()).unwrap();
        assert!(s.feasible);
        assert_span(&s, &[1, 2]);
        let w = s.witness.as_ref().unwrap();
        for p in anti().pairs() {
            assert!(check_pcc(&a, p.alpha, &b, p.beta, w, &cfg().tol).unwrap().holds);
        }
    }

    #[test]
    fn dim3_one_directional_and_degenerate() {
        let a = obs(3, &[0, 1], &[2]);
        let b = obs(3, &[0], &[1, 2]);
        let e2 = StateVector::basis(3, 1);
        let v = check_pcc(&a, 1.0, &b, -1.0, &e2, &cfg().tol).unwrap();
        assert!(v.holds && !v.degenerate);
        let v = check_pcc(&a, -1.0, &b, 1.0, &e2, &cfg().tol).unwrap();
        assert!(!v.holds && v.degenerate && v.conditional_probability.is_none());
        assert!(!solve_gamma(&a, &b, &anti(), false, &cfg()).unwrap().feasible);
        let s = solve_gamma(&a, &b, &same(), false, &cfg()).unwrap();
        assert_span(&s, &[0, 2]);
    }

    #[test]
    fn identical_observables() {
        let a = obs(3, &[0], &[1, 2]);
        let s = solve_pair(&a, 1.0, &a, 1.0, &cfg()).unwrap();
        assert!(s.feasible);
        assert_eq!(s.dimension(), 3);
        assert!(!solve_gamma(&a, &a, &anti(), false, &cfg()).unwrap().feasible);
    }

    #[test]
    fn rotated_pair_has_no_pcc_states() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let f = |i: usize, j: usize, s: f64| {
            let mut v = vec![Complex::new(0.0, 0.0); 4];
            v[i] = Complex::new(r, 0.0);
            v[j] = Complex::new(s * r, 0.0);
            v
        };
        let a = obs(4, &[0, 1], &[2, 3]);
        let b = Observable::from_eigenspaces(
            &[
                (1.0, vec![f(0, 2, 1.0), f(1, 3, 1.0)]),
                (-1.0, vec![f(0, 2, -1.0), f(1, 3, -1.0)]),
            ],
            &cfg().tol,
        )
        .unwrap();
        let s = solve_pair(&a, 1.0, &b, 1.0, &cfg()).unwrap();
        assert!(!s.feasible);
        assert_eq!(s.certificate, Some(Infeasibility::ConstraintVanishes { index: 0 }));
        // oracle: brute-force kernel of the 4x4 system is exactly H_A(-)
        assert_span(&s, &[2, 3]);
    }

    #[test]
    fn shared_outcome_pair_basis() {
        let a = obs(4, &[0, 1], &[2, 3]);
        let b = obs(4, &[0, 2], &[1, 3]);
        let s = solve_pair(&a, 1.0, &b, 1.0, &cfg()).unwrap();
        assert!(s.feasible);
        // oracle: (I - E_B(+)) E_A(+) = |e2><e2|, kernel = span{e1, e3, e4}
        assert_span(&s, &[0, 2, 3]);
        let joint = solve_gamma(&a, &b, &gamma(&[(1.0, 1.0), (1.0, -1.0)]), false, &cfg()).unwrap();
        assert!(!joint.feasible);
    }

    #[test]
    fn kernel_characterization_on_random_combinations() {
        let a = obs(4, &[0, 1], &[2, 3]);
        let b = obs(4, &[0, 2], &[1, 3]);
        let s = solve_pair(&a, 1.0, &b, 1.0, &cfg()).unwrap();
        let op = pair_operator(&a, 1.0, &b, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let mut v = vec![Complex::new(0.0, 0.0); 4];
            for bv in s.linear_basis.vectors() {
                vector::axpy(random::complex_gaussian(&mut rng), bv, &mut v);
            }
            assert!(vector::norm(&op.apply(&v)) <= 1e-9 * vector::norm(&v));
        }
    }

    #[test]
    fn symmetric_gamma() {
        let a = obs(4, &[0, 1], &[2, 3]);
        let b = obs(4, &[0, 2], &[1, 3]);
        let s = solve_gamma(&a, &b, &anti(), true, &cfg()).unwrap();
        assert_span(&s, &[1, 2]);
        assert!(s.feasible);
        assert_eq!(s.constraints.len(), 4);
        let shared = solve_gamma(&a, &b, &gamma(&[(1.0, 1.0), (-1.0, 1.0)]), true, &cfg()).unwrap();
        assert!(!shared.feasible);
    }

    #[test]
    fn gamma_errors() {
        let a = obs(2, &[0], &[1]);
        let big = obs(3, &[0], &[1, 2]);
        assert!(matches!(
            solve_gamma(&a, &big, &anti(), false, &cfg()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            solve_gamma(&a, &a, &gamma(&[(2.0, 1.0)]), false, &cfg()),
            Err(Error::UnknownOutcome(_))
        ));
    }

    fn ghz_observables() -> [Observable<f64>; 3] {
        let z = obs(2, &[0], &[1]);
        let dims = [2, 2, 2];
        [0, 1, 2].map(|s| z.lift_local(s, &dims).unwrap())
    }

    #[test]
    fn triple_joint_ghz() {
        let [a, b, c] = ghz_observables();
        let t = [ValueTriple::new(1.0, 1.0, 1.0), ValueTriple::new(-1.0, -1.0, -1.0)];
        let s = solve_triple(&a, &b, &c, &t, true, &cfg()).unwrap();
        assert!(s.feasible);
        assert_span(&s, &[0, 7]);
        let seq = solve_triple(&a, &b, &c, &t, false, &cfg()).unwrap();
        // oracle: only the |++-> and |--+> amplitudes are forced to zero
        assert_span(&seq, &[0, 2, 3, 4, 5, 7]);
    }

    #[test]
    fn triple_sequential_and_conflicting() {
        let [a, b, c] = ghz_observables();
        let s = solve_triple(&a, &b, &c, &[ValueTriple::new(1.0, 1.0, 1.0)], false, &cfg()).unwrap();
        assert!(s.feasible);
        assert!(s.contains(&e(8, 0), &cfg().tol));
        let bad = [ValueTriple::new(1.0, 1.0, 1.0), ValueTriple::new(1.0, 1.0, -1.0)];
        let s = solve_triple(&a, &b, &c, &bad, false, &cfg()).unwrap();
        assert!(!s.feasible);
        assert!(matches!(s.certificate, Some(Infeasibility::ConstraintVanishes { .. })));
    }

    #[test]
    fn joint_triple_requires_commuting() {
        let [a, b, _] = ghz_observables();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u: CMatrix<f64> = random::unitary(8, &mut rng);
        let c = a.conjugate(&u, &cfg().tol).unwrap();
        assert!(matches!(
            solve_triple(&a, &b, &c, &[ValueTriple::new(1.0, 1.0, 1.0)], true, &cfg()),
            Err(Error::NotCommuting { .. })
        ));
        assert!(solve_triple(&a, &b, &c, &[ValueTriple::new(1.0, 1.0, 1.0)], false, &cfg()).is_ok());
    }

    #[test]
    fn single_precision_solver() {
        let t = crate::numerics::Tolerance::<f32>::default();
        let e4 = |i: usize| StateVector::<f32>::basis(4, i).into_inner();
        let a =
            Observable::<f32>::from_eigenspaces(&[(1.0, vec![e4(0), e4(1)]), (-1.0, vec![e4(2), e4(3)])], &t).unwrap();
        let b =
            Observable::<f32>::from_eigenspaces(&[(1.0, vec![e4(0), e4(2)]), (-1.0, vec![e4(1), e4(3)])], &t).unwrap();
        let g = GammaSet::from_tuples(&[(1.0f32, -1.0f32), (-1.0, 1.0)]).unwrap();
        let s = solve_gamma(&a, &b, &g, false, &Config::default()).unwrap();
        assert!(s.feasible);
        assert!(s.linear_basis.same_span(&SubspaceBasis::coordinate(4, &[1, 2]), &t));
    }
}
