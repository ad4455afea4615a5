//! Finite-dimensional kernel-space machinery over dense complex matrices:
//! minimum-norm inner-product interpolation, Khatri-Rao/Hadamard products of
//! positive semidefinite block matrices, and the classical determinant
//! inequalities (Hadamard, Fischer, Oppenheim, Oppenheim-Schur) together
//! with their block extensions and equality cases.
//!
//! Everything is generic over the real scalar type via [`scalar::Scalar`]
//! (`f32` or `f64`); entries are complex. The `*64` aliases below are the
//! concrete types used by the CLI and the test suites.

pub mod error;
pub mod gen;
pub mod hadamard;
pub mod ineq;
pub mod interp;
pub mod matrix;
pub mod rkhs;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Dense complex matrix over `f64`.
pub type Matrix64 = matrix::Matrix<f64>;
/// Dense complex matrix over `f32`.
pub type Matrix32 = matrix::Matrix<f32>;
/// Block matrix over `f64`.
pub type BlockMatrix64 = matrix::BlockMatrix<f64>;
/// Family of identically block-counted factors over `f64`.
pub type BlockFamily64 = hadamard::BlockFamily<f64>;
/// Complex scalar over `f64`.
pub type Complex64 = num_complex::Complex<f64>;
