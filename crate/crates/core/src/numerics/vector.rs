use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Tolerance;

/// Hermitian inner product `<u|v>`, conjugate-linear in `u`.
pub fn inner<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}

pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm<T: Real>(v: &[Complex<T>]) -> T {
    norm_sqr(v).sqrt()
}

pub fn sub<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn add<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn scale<T: Real>(v: &[Complex<T>], s: Complex<T>) -> Vec<Complex<T>> {
    v.iter().map(|c| c * s).collect()
}

/// `y += a * x`
pub fn axpy<T: Real>(a: Complex<T>, x: &[Complex<T>], y: &mut [Complex<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + a * xi;
    }
}

/// Kronecker product of two vectors, first factor most significant.
pub fn kron<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        out.extend(v.iter().map(|b| a * b));
    }
    out
}

pub fn is_finite<T: Real>(v: &[Complex<T>]) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Rotates `v` so that its first component of (near-)largest modulus is
/// real and positive.
pub fn fix_phase<T: Real>(v: &mut [Complex<T>]) {
    let max = v.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    if max == T::zero() {
        return;
    }
    let cutoff = max * (T::one() - T::epsilon().sqrt());
    if let Some(pivot) = v.iter().find(|c| c.norm() >= cutoff).copied() {
        let phase = pivot.conj() / pivot.norm();
        for c in v.iter_mut() {
            *c = *c * phase;
        }
    }
}

/// Unit-norm coefficient vector over the fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps coefficients that are already normalized within `tol`.
    pub fn new(coeffs: Vec<Complex<T>>, tol: &Tolerance<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroVector);
        }
        if !is_finite(&coeffs) {
            return Err(Error::NonFinite);
        }
        let n = norm(&coeffs);
        if (n - T::one()).abs() > tol.unit() {
            return Err(Error::NotNormalized {
                norm: n.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { coeffs })
    }

    /// Normalizes arbitrary non-zero coefficients.
    pub fn normalized(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if !is_finite(&coeffs) {
            return Err(Error::NonFinite);
        }
        let n = norm(&coeffs);
        if coeffs.is_empty() || n <= T::min_positive_value() {
            return Err(Error::ZeroVector);
        }
        let inv = Complex::new(T::one() / n, T::zero());
        Ok(Self {
            coeffs: scale(&coeffs, inv),
        })
    }

    /// Basis vector `e_{index}` (zero-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); dim];
        coeffs[index] = Complex::new(T::one(), T::zero());
        Self { coeffs }
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::normalized(values.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    pub fn norm(&self) -> T {
        norm(&self.coeffs)
    }
}

impl<T> AsRef<[Complex<T>]> for StateVector<T> {
    fn as_ref(&self) -> &[Complex<T>] {
        &self.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let u = [c(0.0, 1.0)];
        let v = [c(1.0, 0.0)];
        assert_eq!(inner(&u, &v), c(0.0, -1.0));
    }

    #[test]
    fn state_vector_requires_unit_norm() {
        let tol = Tolerance::default();
        assert!(StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)], &tol).is_err());
        let s = StateVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert_eq!(
            StateVector::<f64>::normalized(vec![c(0.0, 0.0)]),
            Err(Error::ZeroVector)
        );
        assert_eq!(StateVector::normalized(vec![c(f64::NAN, 0.0)]), Err(Error::NonFinite));
    }

    #[test]
    fn phase_fix_makes_pivot_real_positive() {
        let mut v = vec![c(0.1, 0.0), c(0.0, -0.9), c(0.3, 0.3)];
        fix_phase(&mut v);
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
        assert!((norm(&v) - norm(&[c(0.1, 0.0), c(0.0, -0.9), c(0.3, 0.3)])).abs() < 1e-15);
    }

    #[test]
    fn kron_orders_first_factor_most_significant() {
        let e0 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e1 = [c(0.0, 0.0), c(1.0, 0.0)];
        let v = kron(&e0, &e1);
        assert_eq!(v[1], c(1.0, 0.0));
        assert_eq!(norm(&v), 1.0);
    }
}
