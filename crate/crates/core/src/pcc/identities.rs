//! Commutator identities for two pairs of `A = -B` correlated observables.
//!
//! Commutators are taken in the Hermitian form `C(X, Y) = i[X, Y]`. The
//! vector and expectation identities are linear and unaffected by the
//! factor `i`; the product identity only holds in this form, since for the
//! bare anti-Hermitian commutator `⟨ψ|[X, Y]²ψ⟩ = -‖[X, Y]ψ‖²`.

use crate::error::{Error, Result};
use crate::numerics::{vector, StateVector, Tolerance};
use crate::observables::Observable;
use crate::scalar::Real;

/// Residuals of the identities satisfied by a state that is `A_i = -B_i`
/// correlated for both pairs `i = 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport<T> {
    /// `‖E_{B_i}(+)ψ - E_{A_i}(-)ψ‖` for `i = 1, 2`.
    pub premise_residuals: [T; 2],
    /// Both premises hold, so the identities below are expected to vanish.
    pub applicable: bool,
    /// `‖C(A1, A2)ψ‖`, nonzero when the `A` observables fail to commute on `ψ`.
    pub commutator_norm: T,
    /// `‖C(B1, B2)ψ + C(A1, A2)ψ‖`
    pub vector_residual: T,
    /// `|⟨ψ|C(B1, B2)ψ⟩ + ⟨ψ|C(A1, A2)ψ⟩|`
    pub expectation_residual: T,
    /// `|⟨ψ|C(A1, A2) C(B1, B2)ψ⟩ + ‖C(A1, A2)ψ‖²|`
    pub product_residual: T,
}

impl<T: Real> CommutatorReport<T> {
    pub fn max_residual(&self) -> T {
        self.vector_residual
            .max(self.expectation_residual)
            .max(self.product_residual)
    }
}

pub fn commutator_identities<T: Real>(
    a1: &Observable<T>,
    a2: &Observable<T>,
    b1: &Observable<T>,
    b2: &Observable<T>,
    psi: &StateVector<T>,
    tol: &Tolerance<T>,
) -> Result<CommutatorReport<T>> {
    let dim = a1.dim();
    for o in [a2, b1, b2] {
        o.ensure_dim(dim)?;
    }
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.dim(),
        });
    }
    for (i, a) in [a1, a2].into_iter().enumerate() {
        for (j, b) in [b1, b2].into_iter().enumerate() {
            if !a.commutes(b, tol)? {
                return Err(Error::CrossPairNotCommuting { a: i + 1, b: j + 1 });
            }
        }
    }
    for o in [a1, a2, b1, b2] {
        o.ensure_dichotomous()?;
    }
    let v = psi.as_slice();
    let plus = T::one();
    let minus = -T::one();
    let premise = |a: &Observable<T>, b: &Observable<T>| -> Result<T> {
        let lhs = b.projector(plus)?.apply(v);
        let rhs = a.projector(minus)?.apply(v);
        Ok(vector::norm(&vector::sub(&lhs, &rhs)))
    };
    let premise_residuals = [premise(a1, b1)?, premise(a2, b2)?];
    let i = num_complex::Complex::new(T::zero(), T::one());
    let ca = a1.matrix().commutator(&a2.matrix()).scaled(i);
    let cb = b1.matrix().commutator(&b2.matrix()).scaled(i);
    let cav = ca.apply(v);
    let cbv = cb.apply(v);
    let expectation = vector::inner(v, &cbv) + vector::inner(v, &cav);
    let product = vector::inner(v, &ca.apply(&cbv));
    Ok(CommutatorReport {
        applicable: premise_residuals.iter().all(|r| *r <= tol.unit()),
        premise_residuals,
        commutator_norm: vector::norm(&cav),
        vector_residual: vector::norm(&vector::add(&cbv, &cav)),
        expectation_residual: expectation.norm(),
        product_residual: (product + num_complex::Complex::new(vector::norm_sqr(&cav), T::zero())).norm(),
    })
}
