use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar underlying all complex arithmetic: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal (tolerances, generated entries).
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal not representable in this scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the scalar type `T`.
pub type C<T> = Complex<T>;

/// Complex zero.
pub fn czero<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// Complex one.
pub fn cone<T: Scalar>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// Real number promoted to a complex value.
pub fn creal<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

// The numeric tolerances are calibrated for f64; for wider-epsilon
// scalars they scale up with the machine precision instead.

/// Default relative tolerance for numeric comparisons.
pub fn default_tol<T: Scalar>() -> T {
    T::real(1e-9).max(T::epsilon() * T::real(8.0))
}

/// Cutoff for classifying eigenvalues against `tol * frobenius`.
pub fn psd_cutoff<T: Scalar>() -> T {
    T::real(1e-10).max(T::epsilon())
}

/// Residual tolerance for operator-range membership tests.
pub fn range_tol<T: Scalar>() -> T {
    T::real(1e-8).max(T::epsilon() * T::real(64.0))
}
