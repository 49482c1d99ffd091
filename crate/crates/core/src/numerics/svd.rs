//! Singular values, rank and kernel by one-sided (Hestenes) Jacobi.
//!
//! The columns of `M` are orthogonalised by plane rotations that are
//! accumulated into `V`; on convergence `M V = U Σ`, so the column norms are
//! the singular values and the columns of `V` whose norms fall under the
//! rank threshold span the kernel.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::subspace::{orthonormalize, SubspaceBasis};
use super::{vector, CMatrix, Tolerance};

const MAX_SWEEPS: usize = 80;

/// Right singular system of a matrix: `sigma[j]` pairs with column `j` of `v`.
#[derive(Debug, Clone)]
pub struct RightSingular<T> {
    pub sigma: Vec<T>,
    pub v: CMatrix<T>,
}

impl<T: Real> RightSingular<T> {
    pub fn max(&self) -> T {
        self.sigma.iter().copied().fold(T::zero(), T::max)
    }

    /// `σ` is zero iff `σ <= abs + rel * σ_max`.
    pub fn zero_threshold(&self, tol: &Tolerance<T>) -> T {
        tol.threshold(self.max())
    }

    pub fn rank(&self, tol: &Tolerance<T>) -> usize {
        let thr = self.zero_threshold(tol);
        self.sigma.iter().filter(|&&s| s > thr).count()
    }
}

pub fn right_singular<T: Real>(m: &CMatrix<T>) -> Result<RightSingular<T>> {
    let n = m.cols();
    let mut cols = m.columns();
    let mut v: Vec<Vec<Complex<T>>> = CMatrix::<T>::identity(n).columns();
    let eps = T::epsilon();
    let tiny = T::min_positive_value().sqrt();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = vector::norm_sqr(&cols[p]);
                let beta = vector::norm_sqr(&cols[q]);
                let gamma = vector::inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= tiny || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let w = (gamma / g).conj();
                let zeta = (beta - alpha) / (g + g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + T::one().hypot(zeta));
                let c = Complex::new(T::one() / T::one().hypot(t), T::zero());
                let s = c * t;
                for mat in [&mut cols, &mut v] {
                    let (lo, hi) = mat.split_at_mut(q);
                    let (cp, cq) = (&mut lo[p], &mut hi[0]);
                    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                        let xp = *x;
                        let yq = *y * w;
                        *x = c * xp - s * yq;
                        *y = s * xp + c * yq;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
    }
    Ok(RightSingular {
        sigma: cols.iter().map(|c| vector::norm(c)).collect(),
        v: CMatrix::from_columns(n, &v),
    })
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Result<Vec<T>> {
    let mut s = right_singular(m)?.sigma;
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

pub fn rank<T: Real>(m: &CMatrix<T>, tol: &Tolerance<T>) -> Result<usize> {
    Ok(right_singular(m)?.rank(tol))
}

/// Orthonormal basis of `{x : M x = 0}` under the shared rank threshold.
pub fn kernel<T: Real>(m: &CMatrix<T>, tol: &Tolerance<T>) -> Result<SubspaceBasis<T>> {
    let rs = right_singular(m)?;
    let thr = rs.zero_threshold(tol);
    let null: Vec<Vec<Complex<T>>> = rs
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thr)
        .map(|(j, _)| rs.v.column(j))
        .collect();
    Ok(SubspaceBasis::from_parts_unchecked(
        m.cols(),
        orthonormalize(m.cols(), &null, tol),
    ))
}
