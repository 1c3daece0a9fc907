//! Scalar abstraction shared by every numerical routine.
//!
//! Linear algebra is delegated to `nalgebra`, so the bound is its `RealField`
//! plus the `num-traits` conversions used to move constants in and results out.

use nalgebra::{DMatrix, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + std::fmt::Debug + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Dense, column-major real matrix.
pub type DenseMatrix<T> = DMatrix<T>;

/// Largest absolute entry, zero for an empty matrix.
pub fn max_abs<T: Real>(m: &DenseMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

pub fn all_finite<T: Real>(m: &DenseMatrix<T>) -> bool {
    m.iter().all(|v| v.is_finite())
}
