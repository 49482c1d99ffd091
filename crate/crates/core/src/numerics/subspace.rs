use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::svd::kernel;
use super::{vector, CMatrix, Tolerance};

/// Two-pass modified Gram–Schmidt. Vectors whose residual after projecting
/// out the accepted ones is below the tolerance (relative to their own
/// norm) are dropped.
pub fn orthonormalize<T: Real>(dim: usize, vectors: &[Vec<Complex<T>>], tol: &Tolerance<T>) -> Vec<Vec<Complex<T>>> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for v in vectors {
        debug_assert_eq!(v.len(), dim);
        let original = vector::norm(v);
        if original <= T::zero() {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = vector::inner(b, &w);
                vector::axpy(-c, b, &mut w);
            }
        }
        let n = vector::norm(&w);
        if n <= tol.threshold(original) || n <= tol.abs {
            continue;
        }
        basis.push(vector::scale(&w, Complex::new(T::one() / n, T::zero())));
        if basis.len() == dim {
            break;
        }
    }
    basis
}

/// Orthonormal basis of a subspace of `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<T> {
    dim: usize,
    vectors: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SubspaceBasis<T> {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self {
            dim,
            vectors: CMatrix::<T>::identity(dim).columns(),
        }
    }

    /// Span of arbitrary vectors; dependent vectors are discarded.
    pub fn span(dim: usize, vectors: &[Vec<Complex<T>>], tol: &Tolerance<T>) -> Result<Self> {
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if !vector::is_finite(v) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self {
            dim,
            vectors: orthonormalize(dim, vectors, tol),
        })
    }

    /// Span of standard basis vectors with the given (zero-based) indices.
    pub fn coordinate(dim: usize, indices: &[usize]) -> Self {
        let id = CMatrix::<T>::identity(dim);
        Self {
            dim,
            vectors: indices.iter().map(|&i| id.column(i)).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(dim: usize, vectors: Vec<Vec<Complex<T>>>) -> Self {
        Self { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the subspace.
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    /// Basis vectors as columns of a `dim x rank` matrix.
    pub fn to_matrix(&self) -> CMatrix<T> {
        CMatrix::from_columns(self.dim, &self.vectors)
    }

    /// Orthogonal projector `Σ |b><b|`.
    pub fn projector(&self) -> CMatrix<T> {
        let b = self.to_matrix();
        b.matmul(&b.adjoint())
    }

    pub fn complement_projector(&self) -> CMatrix<T> {
        &CMatrix::identity(self.dim) - &self.projector()
    }

    /// `max |B^†B - I|`
    pub fn gram_deviation(&self) -> T {
        let b = self.to_matrix();
        (&b.adjoint().matmul(&b) - &CMatrix::identity(self.rank())).max_abs()
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut w = v.to_vec();
        for b in &self.vectors {
            let c = vector::inner(b, &w);
            vector::axpy(-c, b, &mut w);
        }
        w
    }

    /// `‖(I - P)v‖ <= tol` relative to `‖v‖`.
    pub fn contains(&self, v: &[Complex<T>], tol: &Tolerance<T>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let r = vector::norm(&self.residual(v));
        r <= tol.threshold(vector::norm(v))
    }

    /// `other ⊆ self`
    pub fn contains_subspace(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        other.vectors.iter().all(|v| self.contains(v, tol))
    }

    /// Largest residual of `other`'s basis vectors against `self`.
    pub fn containment_residual(&self, other: &Self) -> T {
        other
            .vectors
            .iter()
            .map(|v| vector::norm(&self.residual(v)))
            .fold(T::zero(), T::max)
    }

    /// Mutual containment.
    pub fn same_span(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        self.dim == other.dim
            && self.rank() == other.rank()
            && self.contains_subspace(other, tol)
            && other.contains_subspace(self, tol)
    }

    /// `U + W`
    pub fn join(&self, other: &Self, tol: &Tolerance<T>) -> Result<Self> {
        check_dims(self, other)?;
        let all: Vec<_> = self.vectors.iter().chain(&other.vectors).cloned().collect();
        Ok(Self {
            dim: self.dim,
            vectors: orthonormalize(self.dim, &all, tol),
        })
    }

    /// Basis-independent representative: column-pivoted Gram–Schmidt over
    /// the projector columns `P e_i`, ordered by pivot index. Coordinate
    /// subspaces come out as their coordinate vectors.
    pub fn canonical(&self) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let mut residuals = self.projector().columns();
        let mut picked: Vec<(usize, Vec<Complex<T>>)> = Vec::with_capacity(self.rank());
        let near = T::one() - T::lit(1e-9);
        for _ in 0..self.rank() {
            let norms: Vec<T> = residuals.iter().map(|r| vector::norm(r)).collect();
            let best = norms.iter().copied().fold(T::zero(), T::max);
            if best <= T::zero() {
                break;
            }
            let pivot = norms.iter().position(|&n| n >= best * near).unwrap();
            let mut b = vector::scale(
                &residuals[pivot],
                Complex::new(T::one() / best.max(norms[pivot]), T::zero()),
            );
            // re-orthogonalise against earlier picks
            for (_, prev) in &picked {
                let c = vector::inner(prev, &b);
                vector::axpy(-c, prev, &mut b);
            }
            let bn = vector::norm(&b);
            b = vector::scale(&b, Complex::new(T::one() / bn, T::zero()));
            for r in residuals.iter_mut() {
                let c = vector::inner(&b, r);
                vector::axpy(-c, &b, r);
            }
            picked.push((pivot, b));
        }
        if picked.len() != self.rank() {
            return self.clone();
        }
        picked.sort_by_key(|(i, _)| *i);
        let vectors = picked
            .into_iter()
            .map(|(_, mut v)| {
                vector::fix_phase(&mut v);
                v
            })
            .collect();
        Self { dim: self.dim, vectors }
    }

    /// Image of the subspace under a unitary.
    pub fn transformed(&self, u: &CMatrix<T>) -> Self {
        Self {
            dim: self.dim,
            vectors: self.vectors.iter().map(|v| u.apply(v)).collect(),
        }
    }

    pub fn check_dims_with(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim,
            });
        }
        Ok(())
    }
}

fn check_dims<T: Real>(u: &SubspaceBasis<T>, w: &SubspaceBasis<T>) -> Result<()> {
    if u.dim != w.dim {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            found: w.dim,
        });
    }
    Ok(())
}

/// `U ∩ W` as the kernel of the stacked complements `[(I - P_U); (I - P_W)]`.
pub fn intersect<T: Real>(u: &SubspaceBasis<T>, w: &SubspaceBasis<T>, tol: &Tolerance<T>) -> Result<SubspaceBasis<T>> {
    check_dims(u, w)?;
    if u.is_empty() || w.is_empty() {
        return Ok(SubspaceBasis::empty(u.dim));
    }
    let stacked = CMatrix::vstack(&[u.complement_projector(), w.complement_projector()])?;
    kernel(&stacked, tol)
}

pub fn contains<T: Real>(u: &SubspaceBasis<T>, v: &[Complex<T>], tol: &Tolerance<T>) -> Result<bool> {
    if v.len() != u.dim {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            found: v.len(),
        });
    }
    Ok(u.contains(v, tol))
}

/// `W ⊆ U`
pub fn subspace_contained<T: Real>(u: &SubspaceBasis<T>, w: &SubspaceBasis<T>, tol: &Tolerance<T>) -> Result<bool> {
    check_dims(u, w)?;
    Ok(u.contains_subspace(w, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn e(n: usize, i: usize) -> Vec<Complex<f64>> {
        CMatrix::<f64>::identity(n).column(i)
    }

    #[test]
    fn intersect_coordinate_planes() {
        let u = SubspaceBasis::<f64>::coordinate(4, &[0, 1]);
        let w = SubspaceBasis::<f64>::coordinate(4, &[1, 2]);
        let x = intersect(&u, &w, &tol()).unwrap();
        assert_eq!(x.rank(), 1);
        assert!(x.same_span(&SubspaceBasis::coordinate(4, &[1]), &tol()));
    }

    #[test]
    fn orthogonal_subspaces_meet_in_zero() {
        let u = SubspaceBasis::<f64>::coordinate(4, &[0, 1]);
        let w = SubspaceBasis::<f64>::coordinate(4, &[2, 3]);
        assert!(intersect(&u, &w, &tol()).unwrap().is_empty());
    }

    #[test]
    fn engineered_overlap_is_recovered() {
        // oracle: build the overlap first, then hide it inside rotated spans
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let q: CMatrix<f64> = random::unitary(5, &mut rng);
        let cols = q.columns();
        let u = SubspaceBasis::span(5, &[cols[0].clone(), cols[1].clone(), cols[2].clone()], &tol()).unwrap();
        let mixed: Vec<Complex<f64>> = vector::add(&cols[0], &cols[1]);
        let w = SubspaceBasis::span(5, &[mixed, cols[2].clone(), cols[3].clone()], &tol()).unwrap();
        let x = intersect(&u, &w, &tol()).unwrap();
        assert_eq!(x.rank(), 2);
        for v in x.vectors() {
            assert!(u.contains(v, &tol()) && w.contains(v, &tol()));
        }
        assert_eq!(intersect(&w, &u, &tol()).unwrap().rank(), 2);
    }

    #[test]
    fn containment() {
        let u = SubspaceBasis::<f64>::coordinate(3, &[0, 1]);
        assert!(contains(&u, &e(3, 0), &tol()).unwrap());
        assert!(!contains(&u, &e(3, 2), &tol()).unwrap());
        assert!(contains(&u, &e(2, 0), &tol()).is_err());
        let small = SubspaceBasis::coordinate(3, &[1]);
        assert!(subspace_contained(&u, &small, &tol()).unwrap());
        assert!(!subspace_contained(&small, &u, &tol()).unwrap());
    }

    #[test]
    fn span_drops_dependent_vectors() {
        let v = vec![e(3, 0), vector::add(&e(3, 0), &e(3, 1)), e(3, 1)];
        let s = SubspaceBasis::span(3, &v, &tol()).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.gram_deviation() < 1e-15);
    }

    #[test]
    fn canonical_form_of_coordinate_span() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let a = vec![Complex::new(0.0, 0.0), Complex::new(r, 0.0), Complex::new(0.0, r)];
        let b = vec![Complex::new(0.0, 0.0), Complex::new(r, 0.0), Complex::new(0.0, -r)];
        let s = SubspaceBasis::span(3, &[a, b], &tol()).unwrap().canonical();
        assert!((s.vectors()[0][1] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!((s.vectors()[1][2] - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }
}
