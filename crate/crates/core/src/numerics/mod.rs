//! Dense complex linear algebra under one tolerance policy.
//!
//! Everything here is generic over the real field [`Real`](crate::Real);
//! spectra come from [`eigh`], ranks and kernels from a Jacobi SVD, and
//! subspaces are carried as orthonormal bases.

mod eigen;
mod matrix;
pub mod random;
mod subspace;
mod svd;
mod tolerance;
pub mod vector;

pub use eigen::{eigh, Eigh};
pub use matrix::CMatrix;
pub use subspace::{contains, intersect, orthonormalize, subspace_contained, SubspaceBasis};
pub use svd::{kernel, rank, right_singular, singular_values, RightSingular};
pub use tolerance::Tolerance;
pub use vector::StateVector;
