use crate::error::{Error, Result};
use crate::scalar::Real;

/// Single tolerance policy shared by rank decisions, containment tests and
/// invariant checks.
///
/// A quantity `x` measured against a reference scale `s` counts as zero when
/// `|x| <= abs + rel * s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Result<Self> {
        if !abs.is_finite() || !rel.is_finite() {
            return Err(Error::InvalidTolerance("components must be finite".into()));
        }
        if abs <= T::zero() {
            return Err(Error::InvalidTolerance("abs must be positive".into()));
        }
        if rel < T::zero() {
            return Err(Error::InvalidTolerance("rel must be non-negative".into()));
        }
        Ok(Self { abs, rel })
    }

    /// Zero threshold for a quantity whose natural magnitude is `scale`.
    #[inline]
    pub fn threshold(&self, scale: T) -> T {
        self.abs + self.rel * scale.abs()
    }

    /// Threshold for residuals of (sub-)unit vectors.
    #[inline]
    pub fn unit(&self) -> T {
        self.threshold(T::one())
    }

    #[inline]
    pub fn is_zero(&self, x: T, scale: T) -> bool {
        x.abs() <= self.threshold(scale)
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            abs: T::default_abs_tol(),
            rel: T::default_rel_tol(),
        }
    }
}
