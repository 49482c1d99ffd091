//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point field over which all amplitudes are built.
///
/// The tolerance defaults scale with the precision of the type: the `f64`
/// values are the canonical ones, the `f32` values are loosened so that the
/// same verdicts come out at single precision.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static {
    /// Absolute floor of the default [`Tolerance`](crate::numerics::Tolerance).
    fn default_abs_tol() -> Self;
    /// Relative factor of the default tolerance.
    fn default_rel_tol() -> Self;
    /// Probabilities below this value are treated as zero when they appear
    /// as a conditioning denominator.
    fn degeneracy_threshold() -> Self;
    /// Relative gap under which two eigenvalues are considered equal.
    fn cluster_rel() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    fn default_abs_tol() -> Self {
        1e-9
    }
    fn default_rel_tol() -> Self {
        1e-12
    }
    fn degeneracy_threshold() -> Self {
        1e-12
    }
    fn cluster_rel() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn default_abs_tol() -> Self {
        1e-4
    }
    fn default_rel_tol() -> Self {
        1e-6
    }
    fn degeneracy_threshold() -> Self {
        1e-6
    }
    fn cluster_rel() -> Self {
        1e-4
    }
}
