//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow asymptotically but accurate to working precision on
//! small dense problems, handles degenerate spectra without special cases,
//! and is fully deterministic for a fixed sweep order.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{vector, CMatrix, Tolerance};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching unitary eigenvector
/// matrix (eigenvectors are columns).
#[derive(Debug, Clone)]
pub struct Eigh<T> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> Eigh<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    /// `V diag(λ) V^†`
    pub fn reconstruct(&self) -> CMatrix<T> {
        let lambda = CMatrix::diag_real(&self.values);
        self.vectors.matmul(&lambda).matmul(&self.vectors.adjoint())
    }

    /// Groups eigenvalues whose gaps are at most the clustering bound and
    /// returns `(representative value, member indices)` per cluster.
    pub fn clusters(&self) -> Vec<(T, Vec<usize>)> {
        let scale = self.values.iter().fold(T::one(), |m, v| m.max(v.abs()));
        let gap = T::cluster_rel() * scale;
        let mut out: Vec<(T, Vec<usize>)> = Vec::new();
        for (k, &v) in self.values.iter().enumerate() {
            match out.last_mut() {
                Some((_, members)) if v - self.values[*members.last().unwrap()] <= gap => members.push(k),
                _ => out.push((v, vec![k])),
            }
        }
        for (value, members) in &mut out {
            let sum: T = members.iter().map(|&k| self.values[k]).sum();
            *value = sum / T::from_usize(members.len()).unwrap();
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn eigh<T: Real>(h: &CMatrix<T>, tol: &Tolerance<T>) -> Result<Eigh<T>> {
    h.ensure_hermitian(tol)?;
    let n = h.rows();
    // work on the exactly Hermitian part
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()).scale(T::lit(0.5)));
    let mut v = CMatrix::identity(n);

    let frob = a.frobenius();
    if n > 1 && frob > T::zero() {
        let eps = T::epsilon();
        let rot_floor = eps * frob / T::from_usize(n).unwrap();
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal(&a) <= eps * frob {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    if a[(p, q)].norm() > rot_floor {
                        rotate(&mut a, &mut v, p, q);
                    }
                }
            }
        }
        if !converged && off_diagonal(&a) > eps * frob {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap().then(i.cmp(&j)));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut columns: Vec<Vec<Complex<T>>> = order.iter().map(|&k| v.column(k)).collect();
    for c in &mut columns {
        vector::fix_phase(c);
    }
    Ok(Eigh {
        values,
        vectors: CMatrix::from_columns(n, &columns),
    })
}

fn off_diagonal<T: Real>(a: &CMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with `Q = diag(1, w) J`, where `w` removes the
/// phase of the off-diagonal entry and `J` is the real symmetric Schur
/// rotation of the resulting 2x2 block.
fn rotate<T: Real>(a: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let mag = apq.norm();
    let w = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let zeta = (aqq - app) / (mag + mag);
    let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
    let t = sign / (zeta.abs() + T::one().hypot(zeta));
    let c = T::one() / T::one().hypot(t);
    let s = c * t;
    let cc = Complex::new(c, T::zero());
    let ss = Complex::new(s, T::zero());

    // A <- A Q and V <- V Q
    for m in [&mut *a, &mut *v] {
        for k in 0..n {
            let kp = m[(k, p)];
            let kq = m[(k, q)];
            m[(k, p)] = cc * kp - ss * w * kq;
            m[(k, q)] = ss * kp + cc * w * kq;
        }
    }
    // A <- Q^† A
    let wc = w.conj();
    for k in 0..n {
        let pk = a[(p, k)];
        let qk = a[(q, k)];
        a[(p, k)] = cc * pk - ss * wc * qk;
        a[(q, k)] = ss * pk + cc * wc * qk;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[(p, q)] = zero;
    a[(q, p)] = zero;
    a[(p, p)].im = T::zero();
    a[(q, q)].im = T::zero();
}
