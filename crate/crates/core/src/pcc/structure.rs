//! Symmetry, joint eigenspaces and the dichotomous characterization.

use num_complex::Complex;

use crate::conditioning;
use crate::error::{Error, Result};
use crate::numerics::{intersect, vector, StateVector, SubspaceBasis, Tolerance};
use crate::observables::{GammaSet, Observable};
use crate::scalar::Real;

use super::solve::{check_pcc, solve_gamma};
use super::{value_label, Config, Constraint, Infeasibility, PccVerdict, SolutionSpace};

fn check_state<T: Real>(a: &Observable<T>, psi: &StateVector<T>) -> Result<()> {
    if psi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Order irrelevance `E_A(α) ψ = E_B(β) ψ` with both sides non-zero.
/// Only defined for commuting observables.
pub fn is_symmetric_state<T: Real>(
    a: &Observable<T>,
    alpha: T,
    b: &Observable<T>,
    beta: T,
    psi: &StateVector<T>,
    tol: &Tolerance<T>,
) -> Result<bool> {
    a.ensure_commutes(b, tol)?;
    check_state(a, psi)?;
    let ea = a.projector(alpha)?.apply(psi.as_slice());
    let eb = b.projector(beta)?.apply(psi.as_slice());
    let nondegenerate =
        vector::norm_sqr(&ea) >= T::degeneracy_threshold() && vector::norm_sqr(&eb) >= T::degeneracy_threshold();
    Ok(nondegenerate && vector::norm(&vector::sub(&ea, &eb)) <= tol.unit())
}

/// One block `H_A(α) ∩ H_B(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointBlock<T> {
    pub alpha: T,
    pub beta: T,
    pub basis: SubspaceBasis<T>,
}

/// Decomposition of the space into joint eigenspaces, blocks ordered by
/// `(α, β)` ascending. Empty blocks are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDecomposition<T> {
    pub dim: usize,
    pub blocks: Vec<JointBlock<T>>,
}

impl<T: Real> JointDecomposition<T> {
    pub fn block(&self, alpha: T, beta: T) -> Option<&JointBlock<T>> {
        use crate::observables::values_match;
        self.blocks
            .iter()
            .find(|b| values_match(b.alpha, alpha) && values_match(b.beta, beta))
    }

    /// `Σ dim H_AB(α, β)`
    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.rank()).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.total_rank() == self.dim
    }
}

pub fn joint_eigenspaces<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    tol: &Tolerance<T>,
) -> Result<JointDecomposition<T>> {
    a.ensure_commutes(b, tol)?;
    let mut blocks = Vec::new();
    for oa in a.outcomes() {
        for ob in b.outcomes() {
            blocks.push(JointBlock {
                alpha: oa.value(),
                beta: ob.value(),
                basis: intersect(oa.eigenspace(), ob.eigenspace(), tol)?.canonical(),
            });
        }
    }
    Ok(JointDecomposition { dim: a.dim(), blocks })
}

/// Which dichotomous correlation to characterize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `A = B`: pairs `(+, +)` and `(-, -)`.
    Same,
    /// `A = -B`: pairs `(+, -)` and `(-, +)`.
    Opposite,
}

impl Sign {
    pub fn from_i64(s: i64) -> Option<Self> {
        match s {
            1 => Some(Sign::Same),
            -1 => Some(Sign::Opposite),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Same => 1,
            Sign::Opposite => -1,
        }
    }

    /// The complete Γ-set realizing this correlation.
    pub fn pairs<T: Real>(self) -> [(T, T); 2] {
        let (p, m) = (T::one(), -T::one());
        match self {
            Sign::Same => [(p, p), (m, m)],
            Sign::Opposite => [(p, m), (m, p)],
        }
    }

    pub fn gamma<T: Real>(self) -> GammaSet<T> {
        GammaSet::from_tuples(&self.pairs()).expect("distinct pairs")
    }
}

/// For commuting ±1 observables the `A = sB` states are the superpositions
/// of the two matching joint eigenspaces with both components non-zero.
pub fn characterize_dichotomous<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    sign: Sign,
    cfg: &Config<T>,
) -> Result<SolutionSpace<T>> {
    a.ensure_dichotomous()?;
    b.ensure_dichotomous()?;
    let joint = joint_eigenspaces(a, b, &cfg.tol)?;
    let mut basis = SubspaceBasis::empty(a.dim());
    let mut constraints = Vec::new();
    for (alpha, beta) in sign.pairs::<T>() {
        let block = &joint.block(alpha, beta).expect("dichotomous block").basis;
        basis = basis.join(block, &cfg.tol)?;
        constraints.push(Constraint::new(
            format!("P_AB({},{})ψ ≠ 0", value_label(alpha), value_label(beta)),
            block.projector(),
        ));
    }
    Ok(SolutionSpace::assemble(basis, constraints, cfg))
}

/// `⟨ψ|ÂB̂|ψ⟩` with the eigen-relation residuals `‖ÂB̂ψ ± ψ‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation<T> {
    pub value: Complex<T>,
    /// `‖ÂB̂ψ + ψ‖`, zero on `A = -B` states.
    pub opposite_residual: T,
    /// `‖ÂB̂ψ - ψ‖`, zero on `A = B` states.
    pub same_residual: T,
}

pub fn correlation<T: Real>(a: &Observable<T>, b: &Observable<T>, psi: &StateVector<T>) -> Result<Correlation<T>> {
    b.ensure_dim(a.dim())?;
    check_state(a, psi)?;
    let abpsi = a.matrix().apply(&b.matrix().apply(psi.as_slice()));
    Ok(Correlation {
        value: vector::inner(psi.as_slice(), &abpsi),
        opposite_residual: vector::norm(&vector::add(&abpsi, psi.as_slice())),
        same_residual: vector::norm(&vector::sub(&abpsi, psi.as_slice())),
    })
}

/// Joint system `(α, β)` and `(α, β')` for one `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusivity<T> {
    pub alpha: T,
    pub beta: T,
    pub other_beta: T,
    pub feasible: bool,
    pub certificate: Option<Infeasibility>,
}

/// Checks specific to a dichotomous `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomousShared<T> {
    /// `‖E_B(β)ψ - ψ‖`
    pub eigenstate_residual: T,
    pub in_eigenspace: bool,
    /// `(γ, ‖[E_B(β), E_A(γ)]ψ‖)` for `γ = -1, +1`.
    pub commutator_residuals: Vec<(T, T)>,
    pub commutes_on_state: bool,
    /// `(γ, E_A(γ)ψ = E_B(β)ψ)`; `None` when `A` and `B` do not commute.
    pub symmetric_pairs: Option<Vec<(T, bool)>>,
}

impl<T: Real> DichotomousShared<T> {
    /// Both pairs `(±, β)` symmetric.
    pub fn symmetric(&self) -> Option<bool> {
        self.symmetric_pairs.as_ref().map(|p| p.iter().all(|(_, s)| *s))
    }
}

/// Analysis of one `B` outcome reached from several `A` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedOutcome<T> {
    pub beta: T,
    pub exclusivity: Vec<Exclusivity<T>>,
    /// `(γ, verdict for (A = γ, B = β))`
    pub forward: Vec<(T, PccVerdict<T>)>,
    /// `(γ, P(A = γ | B = β))`, `None` when `E_B(β)ψ = 0`.
    pub reverse: Vec<(T, Option<T>)>,
    pub dichotomous: Option<DichotomousShared<T>>,
}

impl<T: Real> SharedOutcome<T> {
    pub fn max_reverse_probability(&self) -> Option<T> {
        self.reverse.iter().filter_map(|(_, p)| *p).reduce(T::max)
    }

    /// No joint `(α, β)`, `(α, β')` system is feasible.
    pub fn exclusive(&self) -> bool {
        self.exclusivity.iter().all(|e| !e.feasible)
    }
}

pub fn shared_outcome_analysis<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    beta: T,
    psi: &StateVector<T>,
    dichotomous_branch: bool,
    cfg: &Config<T>,
) -> Result<SharedOutcome<T>> {
    b.ensure_dim(a.dim())?;
    check_state(a, psi)?;
    let eb = b.projector(beta)?;
    if dichotomous_branch {
        a.ensure_dichotomous()?;
    }
    let mut exclusivity = Vec::new();
    for alpha in a.values() {
        for other_beta in b.values() {
            if crate::observables::values_match(other_beta, beta) {
                continue;
            }
            let g = GammaSet::from_tuples(&[(alpha, beta), (alpha, other_beta)])?;
            let s = solve_gamma(a, b, &g, false, cfg)?;
            exclusivity.push(Exclusivity {
                alpha,
                beta,
                other_beta,
                feasible: s.feasible,
                certificate: s.certificate,
            });
        }
    }
    let mut forward = Vec::new();
    let mut reverse = Vec::new();
    for gamma in a.values() {
        forward.push((gamma, check_pcc(a, gamma, b, beta, psi, &cfg.tol)?));
        let p = match conditioning::conditional(a, gamma, b, beta, psi, &cfg.tol) {
            Ok(p) => Some(p),
            Err(Error::DegenerateCondition { .. }) => None,
            Err(e) => return Err(e),
        };
        reverse.push((gamma, p));
    }
    let dichotomous = if dichotomous_branch {
        let v = psi.as_slice();
        let ebpsi = eb.apply(v);
        let eigenstate_residual = vector::norm(&vector::sub(&ebpsi, v));
        let commutator_residuals: Vec<(T, T)> = a
            .outcomes()
            .iter()
            .map(|o| (o.value(), vector::norm(&eb.commutator(o.projector()).apply(v))))
            .collect();
        let symmetric_pairs = if a.commutes(b, &cfg.tol)? {
            Some(
                a.values()
                    .into_iter()
                    .map(|g| is_symmetric_state(a, g, b, beta, psi, &cfg.tol).map(|s| (g, s)))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        Some(DichotomousShared {
            eigenstate_residual,
            in_eigenspace: eigenstate_residual <= cfg.tol.unit(),
            commutes_on_state: commutator_residuals.iter().all(|(_, r)| *r <= cfg.tol.unit()),
            commutator_residuals,
            symmetric_pairs,
        })
    } else {
        None
    };
    Ok(SharedOutcome {
        beta,
        exclusivity,
        forward,
        reverse,
        dichotomous,
    })
}
