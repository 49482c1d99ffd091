//! Perfect conditional correlation: verdicts, solution spaces and the
//! structural identities satisfied by PCC states.
//!
//! A state `ψ` is PCC for `(A = α, B = β)` (A measured first) when
//! `P(B = β | A = α, ψ) = 1`. In linear form this is
//! `(I - E_B(β)) E_A(α) ψ = 0` together with the non-degeneracy condition
//! `E_A(α) ψ ≠ 0`. Solvers return the full linear solution space plus the
//! non-degeneracy constraints; feasibility is decided exactly by subspace
//! containment, and a witness state is sampled only afterwards.

mod identities;
mod invariance;
mod solve;
mod structure;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{random, singular_values, vector, CMatrix, StateVector, SubspaceBasis, Tolerance};
use crate::scalar::Real;

pub use identities::{commutator_identities, CommutatorReport};
pub use invariance::{
    family_invariance_check, family_invariance_for_unitaries, unitary_covariance_check, FamilyInvariance, FamilyTrial,
};
pub use solve::{check_pcc, solve_gamma, solve_pair, solve_triple, ValueTriple};
pub use structure::{
    characterize_dichotomous, correlation, is_symmetric_state, joint_eigenspaces, shared_outcome_analysis, Correlation,
    DichotomousShared, Exclusivity, JointBlock, JointDecomposition, SharedOutcome, Sign,
};

/// Redraws allowed when sampling a witness.
pub const WITNESS_ATTEMPTS: usize = 32;

/// Tolerance and seed used by every analysis in one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config<T> {
    pub tol: Tolerance<T>,
    pub seed: u64,
}

impl<T: Real> Config<T> {
    pub const DEFAULT_SEED: u64 = 42;

    pub fn new(tol: Tolerance<T>, seed: u64) -> Self {
        Self { tol, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl<T: Real> Default for Config<T> {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            seed: Self::DEFAULT_SEED,
        }
    }
}

/// SplitMix64 mix of a global seed and an index, for independent
/// per-query streams.
pub fn derive_seed(global: u64, index: u64) -> u64 {
    let mut z = global
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Short signed rendering of an outcome value used in constraint labels.
pub(crate) fn value_label<T: Real>(v: T) -> String {
    let x = v.to_f64().unwrap_or(f64::NAN);
    if x > 0.0 {
        format!("+{x}")
    } else {
        format!("{x}")
    }
}

/// Result of testing one value pair on one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PccVerdict<T> {
    pub holds: bool,
    /// `P(B = β | A = α, ψ)`; `None` when the condition is degenerate.
    pub conditional_probability: Option<T>,
    /// `‖E_B(β) E_A(α) ψ - E_A(α) ψ‖`
    pub residual: T,
    pub degenerate: bool,
}

/// A non-degeneracy requirement `K ψ ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub label: String,
    pub operator: CMatrix<T>,
}

impl<T: Real> Constraint<T> {
    pub fn new(label: impl Into<String>, operator: CMatrix<T>) -> Self {
        Self {
            label: label.into(),
            operator,
        }
    }
}

/// Why a solution space admits no valid state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// The linear equations only have the zero solution.
    EmptyLinearSpace,
    /// Every solution of the linear equations is annihilated by this
    /// constraint's operator.
    ConstraintVanishes { index: usize },
    /// No sampled combination satisfied all constraints.
    WitnessSearchExhausted,
}

impl Infeasibility {
    pub fn describe(&self) -> String {
        match self {
            Infeasibility::EmptyLinearSpace => "linear solution space is {0}".into(),
            Infeasibility::ConstraintVanishes { index } => {
                format!("solution space lies in the kernel of constraint {index}")
            }
            Infeasibility::WitnessSearchExhausted => format!("no witness found in {WITNESS_ATTEMPTS} draws"),
        }
    }
}

/// All states satisfying a system of PCC equations.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpace<T> {
    /// Canonical orthonormal basis of the linear solution space.
    pub linear_basis: SubspaceBasis<T>,
    pub constraints: Vec<Constraint<T>>,
    pub feasible: bool,
    pub certificate: Option<Infeasibility>,
    pub witness: Option<StateVector<T>>,
}

impl<T: Real> SolutionSpace<T> {
    /// Decides feasibility of `basis` under `constraints` and samples a
    /// witness when feasible.
    pub(crate) fn assemble(basis: SubspaceBasis<T>, constraints: Vec<Constraint<T>>, cfg: &Config<T>) -> Self {
        let linear_basis = basis.canonical();
        let certificate = Self::certify(&linear_basis, &constraints, &cfg.tol);
        let mut space = Self {
            linear_basis,
            constraints,
            feasible: false,
            certificate,
            witness: None,
        };
        if space.certificate.is_none() {
            match space.sample_witness(cfg.seed) {
                Some(w) => {
                    space.feasible = true;
                    space.witness = Some(w);
                }
                None => space.certificate = Some(Infeasibility::WitnessSearchExhausted),
            }
        }
        space
    }

    fn certify(basis: &SubspaceBasis<T>, constraints: &[Constraint<T>], tol: &Tolerance<T>) -> Option<Infeasibility> {
        if basis.is_empty() {
            return Some(Infeasibility::EmptyLinearSpace);
        }
        let l = basis.to_matrix();
        constraints.iter().enumerate().find_map(|(index, c)| {
            // ‖K L‖₂ bounds ‖K ψ‖ over unit ψ in the span
            let top = singular_values(&c.operator.matmul(&l))
                .map(|s| s.first().copied().unwrap_or_else(T::zero))
                .unwrap_or_else(|_| T::zero());
            (top <= tol.unit()).then_some(Infeasibility::ConstraintVanishes { index })
        })
    }

    fn sample_witness(&self, seed: u64) -> Option<StateVector<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.linear_basis.dim();
        for _ in 0..WITNESS_ATTEMPTS {
            let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
            for b in self.linear_basis.vectors() {
                vector::axpy(random::complex_gaussian(&mut rng), b, &mut v);
            }
            let Ok(psi) = StateVector::normalized(v) else {
                continue;
            };
            if self.satisfies_constraints(&psi) {
                return Some(psi);
            }
        }
        None
    }

    /// Every constraint `K ψ ≠ 0` holds, measured as `‖K ψ‖²` above the
    /// degeneracy threshold.
    pub fn satisfies_constraints(&self, psi: &StateVector<T>) -> bool {
        self.constraints
            .iter()
            .all(|c| vector::norm_sqr(&c.operator.apply(psi.as_slice())) > T::degeneracy_threshold())
    }

    pub fn dimension(&self) -> usize {
        self.linear_basis.rank()
    }

    /// `ψ` lies in the linear solution space.
    pub fn contains(&self, psi: &[Complex<T>], tol: &Tolerance<T>) -> bool {
        self.linear_basis.contains(psi, tol)
    }
}
