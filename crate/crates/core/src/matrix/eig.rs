use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{czero, Scalar};

/// Eigenvalues (ascending) and an orthonormal set of eigenvectors of a
/// Hermitian matrix. Ties keep the column order produced by the sweeps.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    /// `V diag(lambda) V*`, for residual checks.
    pub fn reconstruct(&self) -> Matrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        Matrix::from_fn(n, n, |i, j| {
            let mut acc = czero();
            for k in 0..n {
                acc += v[(i, k)] * Complex::new(self.eigenvalues[k], T::zero()) * v[(j, k)].conj();
            }
            acc
        })
    }

    pub fn eigenvector(&self, k: usize) -> Matrix<T> {
        self.eigenvectors.column(k)
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps with complex
/// rotations. Deterministic and accurate at desk scale; quadratic
/// convergence sets in after a few sweeps.
pub fn eigh<T: Scalar>(m: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    m.require_hermitian()?;
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize exactly so the sweeps see a_ij = conj(a_ji).
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()).scale(T::real(0.5));
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
    }
    let mut v = Matrix::<T>::identity(n);

    let fro = a.frobenius_norm();
    let stop = fro * T::epsilon() * T::real(4.0);
    let max_sweeps = 64;

    for _ in 0..max_sweeps {
        let off = off_diagonal_norm(&a);
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let r = g.norm();
                if r <= stop * T::real(1e-3) {
                    continue;
                }
                // Unitary rotation zeroing a_pq: diag phases absorb arg(g),
                // then the usual symmetric Jacobi angle.
                let u = g.unscale(r);
                let tau = (a[(q, q)].re - a[(p, p)].re) / (r + r);
                let t = {
                    let denom = tau.abs() + (T::one() + tau * tau).sqrt();
                    if tau < T::zero() {
                        -(T::one() / denom)
                    } else {
                        T::one() / denom
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let cs = Complex::new(c, T::zero());
                let su = u.scale(s);
                let su_conj = u.conj().scale(s);

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_p = cs * akp - su_conj * akq;
                    let new_q = su * akp + cs * akq;
                    a[(k, p)] = new_p;
                    a[(p, k)] = new_p.conj();
                    a[(k, q)] = new_q;
                    a[(q, k)] = new_q.conj();
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                a[(p, p)] = Complex::new(app - t * r, T::zero());
                a[(q, q)] = Complex::new(aqq + t * r, T::zero());
                a[(p, q)] = czero();
                a[(q, p)] = czero();

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - su_conj * vkq;
                    v[(k, q)] = su * vkp + cs * vkq;
                }
            }
        }
    }

    // Ascending eigenvalues; stable sort keeps column order on ties.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("non-finite eigenvalue"));

    let eigenvalues: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            acc += a[(i, j)].norm_sqr() + a[(j, i)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Classification of a Hermitian matrix by its spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Classify by the minimum eigenvalue against `tol * frobenius`.
pub fn psd_check<T: Scalar>(m: &Matrix<T>, tol: T) -> Result<Definiteness> {
    let decomp = eigh(m)?;
    let min = decomp.eigenvalues[0];
    let cutoff = tol * m.frobenius_norm();
    Ok(if min > cutoff {
        Definiteness::PositiveDefinite
    } else if min < -cutoff {
        Definiteness::Indefinite
    } else {
        Definiteness::PositiveSemidefinite
    })
}

/// Error unless `m` classifies as positive definite at the default cutoff.
pub fn require_positive_definite<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    match psd_check(m, crate::scalar::psd_cutoff())? {
        Definiteness::PositiveDefinite => Ok(()),
        _ => Err(Error::NotPositiveDefinite),
    }
}

/// Error if `m` classifies as indefinite at the default cutoff.
pub fn require_psd<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    match psd_check(m, crate::scalar::psd_cutoff())? {
        Definiteness::Indefinite => Err(Error::NotPositiveSemidefinite),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;

    fn assert_near(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn identity_eigenvalues() {
        let d = eigh(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![1., 1., 1.]);
    }

    #[test]
    fn two_by_two_symmetric() {
        // [[1,2],[2,1]] has characteristic polynomial l^2 - 2l - 3 = 0.
        let m = Matrix::from_real_rows(&[vec![1., 2.], vec![2., 1.]]);
        let d = eigh(&m).unwrap();
        assert_near(d.eigenvalues[0], -1., 1e-12);
        assert_near(d.eigenvalues[1], 3., 1e-12);
        let rec = d.reconstruct();
        assert!((&rec - &m).frobenius_norm() < 1e-12);
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let m = Matrix::from_real_rows(&[
            vec![5., 0., 0.],
            vec![0., 2., 0.],
            vec![0., 0., 7.],
        ]);
        let d = eigh(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![2., 5., 7.]);
    }

    #[test]
    fn complex_hermitian() {
        // [[2, i],[-i, 2]] has eigenvalues 1 and 3.
        let m = Matrix::from_rows(&[
            vec![creal(2.), Complex::new(0., 1.)],
            vec![Complex::new(0., -1.), creal(2.)],
        ]);
        let d = eigh(&m).unwrap();
        assert_near(d.eigenvalues[0], 1., 1e-12);
        assert_near(d.eigenvalues[1], 3., 1e-12);
        let vtv = d.eigenvectors.adjoint().matmul(&d.eigenvectors);
        assert!((&vtv - &Matrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::from_real_rows(&[vec![0., 1.], vec![2., 0.]]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian)));
    }

    #[test]
    fn psd_check_examples() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(psd_check(&i2, 1e-10).unwrap(), Definiteness::PositiveDefinite);

        let m = Matrix::from_real_rows(&[vec![1., 2.], vec![2., 1.]]);
        assert_eq!(psd_check(&m, 1e-10).unwrap(), Definiteness::Indefinite);

        let m = Matrix::from_real_rows(&[vec![1., 1.], vec![1., 1.]]);
        assert_eq!(
            psd_check(&m, 1e-10).unwrap(),
            Definiteness::PositiveSemidefinite
        );
    }
}
