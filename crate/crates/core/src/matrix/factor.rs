use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{cone, czero, Scalar, C};

/// Determinant by LU with partial pivoting.
pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<C<T>> {
    Ok(determinant_with_scale(m)?.0)
}

/// Determinant plus the magnitude the computation is accurate relative
/// to: the largest running pivot product. The result itself can be far
/// smaller when trailing pivots are tiny.
pub(crate) fn determinant_with_scale<T: Scalar>(m: &Matrix<T>) -> Result<(C<T>, T)> {
    m.require_square()?;
    let n = m.rows();
    let mut a = m.clone();
    let mut det = cone::<T>();
    let mut partial = T::one();
    let mut magnitude = T::one();
    for k in 0..n {
        // Pivot on the largest modulus in column k.
        let mut piv = k;
        let mut best = a[(k, k)].norm();
        for i in (k + 1)..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == T::zero() {
            return Ok((czero(), magnitude));
        }
        if piv != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            det = -det;
        }
        let pivot = a[(k, k)];
        det *= pivot;
        partial *= pivot.norm();
        magnitude = magnitude.max(partial);
        for i in (k + 1)..n {
            let factor = a[(i, k)] / pivot;
            for j in (k + 1)..n {
                let v = a[(i, j)] - factor * a[(k, j)];
                a[(i, j)] = v;
            }
        }
    }
    Ok((det, magnitude))
}

/// Determinant of a Hermitian matrix as a real number. The imaginary part
/// must be negligible (<= 1e-10 against the running pivot-product scale)
/// and is discarded.
pub fn real_determinant<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    m.require_hermitian()?;
    let (d, magnitude) = determinant_with_scale(m)?;
    let bound = T::real(1e-10) * (T::one() + magnitude);
    if d.im.abs() > bound {
        return Err(Error::Dimension(format!(
            "Hermitian determinant has imaginary part {:.3e}",
            d.im.as_f64()
        )));
    }
    Ok(d.re)
}

/// Determinant of a Hermitian positive definite matrix via LDL*.
///
/// Fails with `NotPositiveDefinite` when a pivot is not strictly positive,
/// so it doubles as a cheap PD probe and a cross-check for [`determinant`].
pub fn ldlt_determinant<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    m.require_hermitian()?;
    let n = m.rows();
    let mut l = Matrix::<T>::identity(n);
    let mut d = vec![T::zero(); n];
    for j in 0..n {
        let mut dj = m[(j, j)].re;
        for k in 0..j {
            dj -= l[(j, k)].norm_sqr() * d[k];
        }
        if dj <= T::zero() {
            return Err(Error::NotPositiveDefinite);
        }
        d[j] = dj;
        for i in (j + 1)..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj() * Complex::new(d[k], T::zero());
            }
            l[(i, j)] = v.unscale(dj);
        }
    }
    Ok(d.into_iter().fold(T::one(), |a, b| a * b))
}

/// Solve `a x = b` for square nonsingular `a` by Gaussian elimination with
/// partial pivoting. `b` may have several columns.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.require_square()?;
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "solve rhs has {} rows, matrix is {}x{}",
            b.rows(),
            n,
            n
        )));
    }
    let mut aug = Matrix::hstack(&[a, b]);
    let total = n + b.cols();
    for k in 0..n {
        let mut piv = k;
        let mut best = aug[(k, k)].norm();
        for i in (k + 1)..n {
            let v = aug[(i, k)].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best <= T::epsilon() * a.frobenius_norm() {
            return Err(Error::SingularGram);
        }
        if piv != k {
            for j in 0..total {
                let tmp = aug[(k, j)];
                aug[(k, j)] = aug[(piv, j)];
                aug[(piv, j)] = tmp;
            }
        }
        let pivot = aug[(k, k)];
        for i in (k + 1)..n {
            let factor = aug[(i, k)] / pivot;
            if factor == czero() {
                continue;
            }
            for j in k..total {
                let v = aug[(i, j)] - factor * aug[(k, j)];
                aug[(i, j)] = v;
            }
        }
    }
    let mut x = Matrix::<T>::zeros(n, b.cols());
    for col in 0..b.cols() {
        for i in (0..n).rev() {
            let mut acc = aug[(i, n + col)];
            for j in (i + 1)..n {
                acc -= aug[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / aug[(i, i)];
        }
    }
    Ok(x)
}
