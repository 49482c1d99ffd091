//! Covariance of PCC under unitary conjugation and form invariance of the
//! antisymmetric two-qubit state.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{random, vector, CMatrix, StateVector};
use crate::observables::{GammaSet, Observable};
use crate::scalar::Real;

use super::solve::{check_pcc, solve_gamma};
use super::Config;

/// `Γ` solutions transform covariantly under `(A, B, ψ) ↦ (UAU†, UBU†, Uψ)`:
/// identical feasibility, `U` maps one solution space onto the other, and
/// the transported witness passes every pair.
pub fn unitary_covariance_check<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    gamma: &GammaSet<T>,
    u: &CMatrix<T>,
    cfg: &Config<T>,
) -> Result<bool> {
    let au = a.conjugate(u, &cfg.tol)?;
    let bu = b.conjugate(u, &cfg.tol)?;
    let plain = solve_gamma(a, b, gamma, false, cfg)?;
    let moved = solve_gamma(&au, &bu, gamma, false, cfg)?;
    if plain.feasible != moved.feasible || plain.dimension() != moved.dimension() {
        return Ok(false);
    }
    if !plain
        .linear_basis
        .transformed(u)
        .same_span(&moved.linear_basis, &cfg.tol)
    {
        return Ok(false);
    }
    if let Some(w) = &plain.witness {
        let uw = StateVector::normalized(u.apply(w.as_slice()))?;
        for p in gamma.pairs() {
            if !check_pcc(&au, p.alpha, &bu, p.beta, &uw, &cfg.tol)?.holds {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of one local unitary `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyTrial {
    /// `(f₊g₋ - f₋g₊)/√2` is `(±, ∓)` PCC for `(a_u ⊗ I, I ⊗ b_u)`.
    pub antisymmetric_holds: bool,
    /// Same test for the control `(f₊g₋ + f₋g₊)/√2`.
    pub symmetric_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInvariance {
    pub trials: Vec<FamilyTrial>,
}

impl FamilyInvariance {
    pub fn antisymmetric_passes(&self) -> usize {
        self.trials.iter().filter(|t| t.antisymmetric_holds).count()
    }

    pub fn symmetric_failures(&self) -> usize {
        self.trials.iter().filter(|t| !t.symmetric_holds).count()
    }

    /// Every trial keeps the antisymmetric state and at least one breaks
    /// the symmetric control.
    pub fn invariant(&self) -> bool {
        self.antisymmetric_passes() == self.trials.len() && self.symmetric_failures() > 0
    }
}

fn eigenvector<T: Real>(a: &Observable<T>, value: T) -> Result<Vec<Complex<T>>> {
    let basis = a.eigenspace(value)?;
    if basis.rank() != 1 {
        return Err(Error::InvalidObservable(format!(
            "eigenspace for {} must be one-dimensional",
            value.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(basis.vectors()[0].clone())
}

fn pair_states<T: Real>(a: &Observable<T>, b: &Observable<T>) -> Result<[StateVector<T>; 2]> {
    let (p, m) = (T::one(), -T::one());
    let pm = vector::kron(&eigenvector(a, p)?, &eigenvector(b, m)?);
    let mp = vector::kron(&eigenvector(a, m)?, &eigenvector(b, p)?);
    Ok([
        StateVector::normalized(vector::sub(&pm, &mp))?,
        StateVector::normalized(vector::add(&pm, &mp))?,
    ])
}

fn opposite_pcc<T: Real>(a: &Observable<T>, b: &Observable<T>, psi: &StateVector<T>, cfg: &Config<T>) -> Result<bool> {
    let (p, m) = (T::one(), -T::one());
    Ok(check_pcc(a, p, b, m, psi, &cfg.tol)?.holds && check_pcc(a, m, b, p, psi, &cfg.tol)?.holds)
}

/// Runs the form-invariance test for explicit local unitaries.
pub fn family_invariance_for_unitaries<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    unitaries: &[CMatrix<T>],
    cfg: &Config<T>,
) -> Result<FamilyInvariance> {
    for o in [a, b] {
        o.ensure_dichotomous()?;
        o.ensure_dim(2)?;
    }
    let [anti, sym] = pair_states(a, b)?;
    let dims = [2, 2];
    let mut trials = Vec::with_capacity(unitaries.len());
    for u in unitaries {
        let au = a.conjugate(u, &cfg.tol)?.lift_local(0, &dims)?;
        let bu = b.conjugate(u, &cfg.tol)?.lift_local(1, &dims)?;
        trials.push(FamilyTrial {
            antisymmetric_holds: opposite_pcc(&au, &bu, &anti, cfg)?,
            symmetric_holds: opposite_pcc(&au, &bu, &sym, cfg)?,
        });
    }
    Ok(FamilyInvariance { trials })
}

/// Form-invariance test over `trials` Haar-random local unitaries drawn
/// from `cfg.seed`.
pub fn family_invariance_check<T: Real>(
    a: &Observable<T>,
    b: &Observable<T>,
    trials: usize,
    cfg: &Config<T>,
) -> Result<FamilyInvariance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let us: Vec<CMatrix<T>> = (0..trials).map(|_| random::unitary(2, &mut rng)).collect();
    family_invariance_for_unitaries(a, b, &us, cfg)
}
