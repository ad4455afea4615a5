use num_complex::Complex;

use crate::error::Result;
use crate::matrix::eig::eigh;
use crate::matrix::Matrix;
use crate::scalar::{czero, Scalar};

/// Moore-Penrose inverse with eigenvalues below `tol * frobenius` treated
/// as zero.
///
/// Hermitian inputs are inverted on their own eigenbasis; everything else
/// goes through the Hermitian eigendecomposition of `M* M`, using
/// `M+ = (M* M)+ M*`. Total on all matrices, including rank-deficient and
/// rectangular ones.
pub fn moore_penrose<T: Scalar>(m: &Matrix<T>, tol: T) -> Result<Matrix<T>> {
    let fro = m.frobenius_norm();
    if fro == T::zero() {
        return Ok(m.transpose());
    }
    let cutoff = tol * fro;

    let hermitian = m.is_square() && m.hermitian_check(crate::scalar::default_tol())?;
    if hermitian {
        let decomp = eigh(m)?;
        let n = m.rows();
        let inv: Vec<T> = decomp
            .eigenvalues
            .iter()
            .map(|&l| if l.abs() > cutoff { T::one() / l } else { T::zero() })
            .collect();
        let v = &decomp.eigenvectors;
        return Ok(Matrix::from_fn(n, n, |i, j| {
            let mut acc = czero();
            for k in 0..n {
                acc += v[(i, k)] * Complex::new(inv[k], T::zero()) * v[(j, k)].conj();
            }
            acc
        }));
    }

    let gram = m.adjoint().matmul(m);
    let decomp = eigh(&gram)?;
    let n = gram.rows();
    // Eigenvalues of M*M are squared singular values; the cutoff must be
    // relative to the scale of M*M itself, or eigensolver noise (one part
    // in 1e16 of |M*M|) lands above a squared cutoff and gets inverted.
    let sq_cut = (cutoff * cutoff).max(tol * gram.frobenius_norm());
    let inv: Vec<T> = decomp
        .eigenvalues
        .iter()
        .map(|&l| if l > sq_cut { T::one() / l } else { T::zero() })
        .collect();
    let v = &decomp.eigenvectors;
    let gram_pinv = Matrix::from_fn(n, n, |i, j| {
        let mut acc = czero();
        for k in 0..n {
            acc += v[(i, k)] * Complex::new(inv[k], T::zero()) * v[(j, k)].conj();
        }
        acc
    });
    Ok(gram_pinv.matmul(&m.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;

    fn penrose_residuals(m: &Matrix<f64>, p: &Matrix<f64>) -> [f64; 4] {
        let scale = 1. + m.frobenius_norm() + p.frobenius_norm();
        let mpm = m.matmul(p).matmul(m);
        let pmp = p.matmul(m).matmul(p);
        let mp = m.matmul(p);
        let pm = p.matmul(m);
        [
            (&mpm - m).frobenius_norm() / scale,
            (&pmp - p).frobenius_norm() / scale,
            (&mp.adjoint() - &mp).frobenius_norm() / scale,
            (&pm.adjoint() - &pm).frobenius_norm() / scale,
        ]
    }

    #[test]
    fn diagonal_rule() {
        let m = Matrix::from_real_rows(&[vec![2., 0.], vec![0., 0.]]);
        let p = moore_penrose(&m, 1e-10).unwrap();
        assert!((p[(0, 0)] - creal(0.5)).norm() < 1e-14);
        assert!(p[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn identity_is_self_inverse() {
        let m = Matrix::<f64>::identity(3);
        let p = moore_penrose(&m, 1e-10).unwrap();
        assert!((&p - &m).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rank_one_example() {
        // [[1,1],[1,1]]+ = [[0.25,0.25],[0.25,0.25]] by the rank-1 rule.
        let m = Matrix::from_real_rows(&[vec![1., 1.], vec![1., 1.]]);
        let p = moore_penrose(&m, 1e-10).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((p[(i, j)] - creal(0.25)).norm() < 1e-12);
            }
        }
        for r in penrose_residuals(&m, &p) {
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn rectangular_input() {
        let m = Matrix::from_rows(&[
            vec![creal(1.), creal(0.), Complex::new(0., 1.)],
            vec![creal(0.), creal(2.), creal(0.)],
        ]);
        let p = moore_penrose(&m, 1e-10).unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 2));
        for r in penrose_residuals(&m, &p) {
            assert!(r < 1e-10, "residual {r}");
        }
    }

    #[test]
    fn zero_matrix_total() {
        let m = Matrix::<f64>::zeros(2, 3);
        let p = moore_penrose(&m, 1e-10).unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 2));
        assert_eq!(p.frobenius_norm(), 0.);
    }
}
