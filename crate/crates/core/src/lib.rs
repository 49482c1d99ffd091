//! Perfect conditional correlation (PCC) analysis for finite-dimensional
//! quantum observables.
//!
//! Observables are spectral families of orthogonal projectors. A state
//! `ψ` is PCC for the value pair `(A = α, B = β)` when a `B` measurement
//! performed after the outcome `A = α` yields `β` with probability one
//! under the Lüders update. The crate tests that property, solves for the
//! full space of states exhibiting it for a set of value pairs, and
//! checks the structural identities such states satisfy.
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); the aliases at the crate root fix it to `f64`,
//! which is what the scenario layer and the CLI use.

pub mod conditioning;
mod error;
pub mod numerics;
pub mod observables;
pub mod pcc;
mod scalar;
pub mod scenarios;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::Real;

/// Double-precision amplitude.
pub type C64 = Complex<f64>;
pub type CMatrix = numerics::CMatrix<f64>;
pub type StateVector = numerics::StateVector<f64>;
pub type SubspaceBasis = numerics::SubspaceBasis<f64>;
pub type Tolerance = numerics::Tolerance<f64>;
pub type Observable = observables::Observable<f64>;
pub type GammaSet = observables::GammaSet<f64>;
pub type Config = pcc::Config<f64>;
pub type PccVerdict = pcc::PccVerdict<f64>;
pub type SolutionSpace = pcc::SolutionSpace<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type CMatrix = crate::numerics::CMatrix<f32>;
    pub type StateVector = crate::numerics::StateVector<f32>;
    pub type SubspaceBasis = crate::numerics::SubspaceBasis<f32>;
    pub type Tolerance = crate::numerics::Tolerance<f32>;
    pub type Observable = crate::observables::Observable<f32>;
    pub type Config = crate::pcc::Config<f32>;
    pub type SolutionSpace = crate::pcc::SolutionSpace<f32>;
}
