//! Born probabilities, Lüders updates and sequential conditional
//! probabilities.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{vector, StateVector, Tolerance};
use crate::observables::Observable;
use crate::scalar::Real;

/// Outcome `value` of `observable`.
#[derive(Debug, Clone, Copy)]
pub struct MeasurementEvent<'a, T> {
    pub observable: &'a Observable<T>,
    pub value: T,
}

impl<'a, T: Real> MeasurementEvent<'a, T> {
    pub fn new(observable: &'a Observable<T>, value: T) -> Result<Self> {
        observable.outcome(value)?;
        Ok(Self { observable, value })
    }

    /// `E(value) v`
    pub fn project(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Ok(self.observable.projector(self.value)?.apply(v))
    }
}

/// Ordered sequence of measurement events, first measured first.
#[derive(Debug, Clone)]
pub struct Chain<'a, T> {
    events: Vec<MeasurementEvent<'a, T>>,
}

impl<'a, T: Real> Chain<'a, T> {
    pub fn new(events: Vec<MeasurementEvent<'a, T>>) -> Result<Self> {
        let first = events.first().ok_or(Error::EmptyChain)?;
        let dim = first.observable.dim();
        for e in &events[1..] {
            e.observable.ensure_dim(dim)?;
        }
        Ok(Self { events })
    }

    pub fn events(&self) -> &[MeasurementEvent<'a, T>] {
        &self.events
    }

    pub fn dim(&self) -> usize {
        self.events[0].observable.dim()
    }

    /// `E_n ⋯ E_2 E_1 ψ`, events applied in measurement order.
    pub fn apply(&self, psi: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let mut v = psi.to_vec();
        for e in &self.events {
            v = e.project(&v)?;
        }
        Ok(v)
    }
}

fn check_dim<T: Real>(a: &Observable<T>, psi: &StateVector<T>) -> Result<()> {
    if psi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Validates a computed probability: anything above `1 + tol` is a
/// numerical fault; otherwise the value is clamped to `[0, 1]`.
fn probability<T: Real>(p: T, tol: &Tolerance<T>) -> Result<T> {
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    if p > T::one() + tol.abs {
        return Err(Error::ProbabilityOutOfRange(p.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(p.max(T::zero()).min(T::one()))
}

fn denominator<T: Real>(p: T) -> Result<T> {
    if p < T::degeneracy_threshold() {
        return Err(Error::DegenerateCondition {
            probability: p.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(p)
}

/// `‖E_A(α) ψ‖²`
pub fn born<T: Real>(a: &Observable<T>, alpha: T, psi: &StateVector<T>, tol: &Tolerance<T>) -> Result<T> {
    check_dim(a, psi)?;
    let p = vector::norm_sqr(&a.projector(alpha)?.apply(psi.as_slice()));
    probability(p, tol)
}

/// Post-measurement state `E_A(α) ψ / ‖E_A(α) ψ‖`.
pub fn luders<T: Real>(
    a: &Observable<T>,
    alpha: T,
    psi: &StateVector<T>,
    tol: &Tolerance<T>,
) -> Result<StateVector<T>> {
    check_dim(a, psi)?;
    let projected = a.projector(alpha)?.apply(psi.as_slice());
    denominator(probability(vector::norm_sqr(&projected), tol)?)?;
    StateVector::normalized(projected)
}

/// `P(B = β | A = α, ψ) = ‖E_B(β) E_A(α) ψ‖² / ‖E_A(α) ψ‖²`
pub fn conditional<T: Real>(
    b: &Observable<T>,
    beta: T,
    a: &Observable<T>,
    alpha: T,
    psi: &StateVector<T>,
    tol: &Tolerance<T>,
) -> Result<T> {
    let chain = Chain::new(vec![MeasurementEvent::new(a, alpha)?])?;
    chain_conditional(&chain, &MeasurementEvent::new(b, beta)?, psi, tol)
}

/// Probability of `target` after the whole chain has been observed:
/// `‖E_target Π ψ‖² / ‖Π ψ‖²` with `Π` the chain's projector product.
pub fn chain_conditional<T: Real>(
    chain: &Chain<'_, T>,
    target: &MeasurementEvent<'_, T>,
    psi: &StateVector<T>,
    tol: &Tolerance<T>,
) -> Result<T> {
    target.observable.ensure_dim(chain.dim())?;
    check_dim(target.observable, psi)?;
    let conditioned = chain.apply(psi.as_slice())?;
    let den = denominator(probability(vector::norm_sqr(&conditioned), tol)?)?;
    let num = vector::norm_sqr(&target.project(&conditioned)?);
    probability(num / den, tol)
}
