//! Seeded random matrices for witnesses, covariance checks and tests.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::scalar::Real;

use super::{vector, CMatrix};

/// Standard complex Gaussian `(x + iy)/√2`.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(T::lit(re * s), T::lit(im * s))
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary: Gram–Schmidt on a Ginibre matrix, with the
/// diagonal phases of the implied `R` factor absorbed.
pub fn unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    loop {
        let g: CMatrix<T> = ginibre(n, n, rng);
        let mut q: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
        let mut ok = true;
        for col in g.columns() {
            let mut w = col.clone();
            for _ in 0..2 {
                for b in &q {
                    let c = vector::inner(b, &w);
                    vector::axpy(-c, b, &mut w);
                }
            }
            let nrm = vector::norm(&w);
            if nrm < T::lit(1e-6) {
                ok = false;
                break;
            }
            // r_kk = <q_k|col> must be real positive
            let w = vector::scale(&w, Complex::new(T::one() / nrm, T::zero()));
            let r = vector::inner(&w, &col);
            let phase = r / r.norm();
            q.push(vector::scale(&w, phase));
        }
        if ok {
            return CMatrix::from_columns(n, &q);
        }
    }
}

/// Random Hermitian matrix `(G + G^†)/2`.
pub fn hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let g: CMatrix<T> = ginibre(n, n, rng);
    (&g + &g.adjoint()).scaled_real(T::lit(0.5))
}
