//! Inner-product interpolation problems (IPIP) posed against a Gram matrix.
//!
//! A problem asks for `f` with `<f, a_i> = b_i` over an ordered family
//! `{a_i}`; the minimum-norm solution lives in the span of the family, so
//! coefficients against the Gram matrix determine it completely. Canonical
//! data (zeros followed by a single one) produce the lambda sequence
//! `lambda_k = sqrt(det G_{k-1} / det G_k)`, which ties minimum norms to
//! determinant ratios and drives every inequality downstream.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{
    ambient_inner, eigh, leading_principal_block, lu_solve, moore_penrose, psd_check,
    real_determinant, require_positive_definite, BlockMatrix, Definiteness, Matrix,
};
use crate::scalar::{self, czero, Scalar};

/// An interpolation instance: Gram matrix `G[i][j] = <a_j, a_i>` plus data.
#[derive(Clone, Debug)]
pub struct IpipProblem<T: Scalar> {
    gram: Matrix<T>,
    data: Matrix<T>,
    /// Set when the data is canonical `e_k` (1-based `k`).
    order: Option<usize>,
}

impl<T: Scalar> IpipProblem<T> {
    pub fn new(gram: Matrix<T>, data: Matrix<T>) -> Result<Self> {
        gram.require_hermitian()?;
        if psd_check(&gram, scalar::psd_cutoff())? == Definiteness::Indefinite {
            return Err(Error::NotPositiveSemidefinite);
        }
        if data.cols() != 1 || data.rows() != gram.rows() {
            return Err(Error::Dimension(format!(
                "data must be {}x1, got {}x{}",
                gram.rows(),
                data.rows(),
                data.cols()
            )));
        }
        Ok(IpipProblem {
            gram,
            data,
            order: None,
        })
    }

    /// Problem of order `k` (1-based): `b_1 = ... = b_{k-1} = 0, b_k = 1`
    /// over the first `k` family members.
    pub fn canonical(gram: Matrix<T>, order: usize) -> Result<Self> {
        if order == 0 || order > gram.rows() {
            return Err(Error::IndexOutOfRange(format!(
                "order {order} of {}",
                gram.rows()
            )));
        }
        let truncated = gram.submatrix(0, 0, order, order);
        let data = Matrix::basis_column(order, order - 1);
        let mut problem = Self::new(truncated, data)?;
        problem.order = Some(order);
        Ok(problem)
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn data(&self) -> &Matrix<T> {
        &self.data
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }
}

/// Minimum-norm solution in coefficient form `f = sum c_i a_i`.
#[derive(Clone, Debug)]
pub struct IpipSolution<T: Scalar> {
    pub feasible: bool,
    pub coefficients: Option<Matrix<T>>,
    pub norm: Option<T>,
}

impl<T: Scalar> IpipSolution<T> {
    fn infeasible() -> Self {
        IpipSolution {
            feasible: false,
            coefficients: None,
            norm: None,
        }
    }
}

/// Solve for the unique minimum-norm interpolant: `c = G+ b`.
///
/// Infeasible data (outside `ran G`) is an answer, not an error.
pub fn solve_ipip<T: Scalar>(problem: &IpipProblem<T>) -> Result<IpipSolution<T>> {
    let g = &problem.gram;
    let b = &problem.data;
    let pinv = moore_penrose(g, scalar::psd_cutoff())?;
    let c = pinv.matmul(b);
    let residual = (&g.matmul(&c) - b).frobenius_norm();
    if residual > scalar::range_tol::<T>() * (T::one() + b.frobenius_norm()) {
        return Ok(IpipSolution::infeasible());
    }
    let norm_sq = ambient_inner(&c, b).re.max(T::zero());
    Ok(IpipSolution {
        feasible: true,
        coefficients: Some(c),
        norm: Some(norm_sq.sqrt()),
    })
}

/// Squared minimum norm by the bordered determinant
/// `-det([[0, b*], [b, G]]) / det(G)`; requires a nonsingular Gram.
pub fn min_norm_bordered<T: Scalar>(gram: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    gram.require_hermitian()?;
    if b.cols() != 1 || b.rows() != gram.rows() {
        return Err(Error::Dimension(format!(
            "data must be {}x1, got {}x{}",
            gram.rows(),
            b.rows(),
            b.cols()
        )));
    }
    match psd_check(gram, scalar::psd_cutoff())? {
        Definiteness::PositiveDefinite => {}
        Definiteness::PositiveSemidefinite => return Err(Error::SingularGram),
        Definiteness::Indefinite => return Err(Error::NotPositiveSemidefinite),
    }
    let n = gram.rows();
    let bordered = Matrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => czero(),
        (0, j) => b[(j - 1, 0)].conj(),
        (i, 0) => b[(i - 1, 0)],
        (i, j) => gram[(i - 1, j - 1)],
    });
    let num = real_determinant(&bordered)?;
    let den = real_determinant(gram)?;
    Ok(-num / den)
}

/// Minimum norms of the canonical problems over leading principal minors:
/// `lambda_k = sqrt(det G_{k-1} / det G_k)`, `det G_0 = 1`.
pub fn lambda_sequence<T: Scalar>(gram: &Matrix<T>) -> Result<Vec<T>> {
    gram.require_hermitian()?;
    require_positive_definite(gram)?;
    let n = gram.rows();
    let mut prev = T::one();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let minor = real_determinant(&gram.submatrix(0, 0, k, k))?;
        if minor <= T::zero() {
            return Err(Error::NotPositiveDefinite);
        }
        out.push((prev / minor).sqrt());
        prev = minor;
    }
    Ok(out)
}

/// Both sides of the identity `prod lambda_i = det(T)^{-1/2}`.
#[derive(Clone, Debug)]
pub struct LambdaDetIdentity<T> {
    pub product: T,
    pub inv_sqrt_det: T,
    pub agree: bool,
}

/// Compare the lambda product of the canonical basis IPIPs against
/// `det(T)^{-1/2}`; the two routes share no arithmetic past the input.
pub fn lambda_det_identity<T: Scalar>(t: &Matrix<T>) -> Result<LambdaDetIdentity<T>> {
    let product = lambda_sequence(t)?.into_iter().fold(T::one(), |a, b| a * b);
    let inv_sqrt_det = T::one() / real_determinant(t)?.sqrt();
    let agree = (product - inv_sqrt_det).abs() <= T::real(1e-8) * (T::one() + inv_sqrt_det.abs());
    Ok(LambdaDetIdentity {
        product,
        inv_sqrt_det,
        agree,
    })
}

fn require_orthonormal_columns<T: Scalar>(u: &Matrix<T>) -> Result<()> {
    let gram = u.adjoint().matmul(u);
    let dev = (&gram - &Matrix::identity(u.cols())).frobenius_norm();
    if dev <= T::real(1e-8) * (T::one() + T::from_usize(u.cols()).unwrap().sqrt()) {
        Ok(())
    } else {
        Err(Error::NotOrthonormal)
    }
}

/// Representation matrix `U* T U` of `T` in the orthonormal basis given by
/// the columns of `U`. Spectra and range inner products are preserved.
pub fn scalarize<T: Scalar>(t: &Matrix<T>, u: &Matrix<T>) -> Result<Matrix<T>> {
    t.require_square()?;
    if u.rows() != t.rows() || !u.is_square() {
        return Err(Error::Dimension(format!(
            "basis must be {0}x{0}, got {1}x{2}",
            t.rows(),
            u.rows(),
            u.cols()
        )));
    }
    require_orthonormal_columns(u)?;
    Ok(u.adjoint().matmul(t).matmul(u))
}

/// Block-diagonal global basis from per-block orthonormal bases.
pub(crate) fn assemble_block_basis<T: Scalar>(
    block: &BlockMatrix<T>,
    bases: &[Matrix<T>],
) -> Result<Matrix<T>> {
    let partition = block.partition();
    let s = partition.block_count();
    if bases.len() != s {
        return Err(Error::Dimension(format!(
            "expected {s} per-block bases, got {}",
            bases.len()
        )));
    }
    let n = block.dim();
    let mut u = Matrix::zeros(n, n);
    for i in 1..=s {
        let basis = &bases[i - 1];
        if basis.rows() != partition.size(i) || basis.cols() != partition.size(i) {
            return Err(Error::Dimension(format!(
                "basis for block {i} must be {0}x{0}",
                partition.size(i)
            )));
        }
        require_orthonormal_columns(basis)?;
        u.set_submatrix(partition.offset(i), partition.offset(i), basis);
    }
    Ok(u)
}

/// Per-block eigenvector bases of the diagonal blocks, ascending eigenvalue
/// order. The standard choice of CONS for the block-ordered problems.
pub fn eigen_cons<T: Scalar>(block: &BlockMatrix<T>) -> Result<Vec<Matrix<T>>> {
    (1..=block.block_count())
        .map(|i| Ok(eigh(&block.diagonal_block(i))?.eigenvectors))
        .collect()
}

/// One block's lambda product next to its determinant-ratio counterpart.
#[derive(Clone, Debug)]
pub struct BlockLambdaProduct<T> {
    pub product: T,
    pub minor_ratio: T,
}

/// For each block `i`, the product of the block-ordered canonical minimum
/// norms, paired with `sqrt(det (T)_{i-1} / det (T)_i)` computed from the
/// leading principal block submatrices.
pub fn block_lambda_products<T: Scalar>(
    t: &BlockMatrix<T>,
    bases: &[Matrix<T>],
) -> Result<Vec<BlockLambdaProduct<T>>> {
    require_positive_definite(t.matrix())?;
    let u = assemble_block_basis(t, bases)?;
    let scalarized = scalarize(t.matrix(), &u)?;
    let lambdas = lambda_sequence(&scalarized)?;

    let partition = t.partition();
    let mut out = Vec::with_capacity(partition.block_count());
    let mut prev_minor = T::one();
    for i in 1..=partition.block_count() {
        let product = lambdas[partition.offset(i)..partition.offset(i) + partition.size(i)]
            .iter()
            .fold(T::one(), |a, &b| a * b);
        let minor = real_determinant(&leading_principal_block(t, i)?)?;
        let minor_ratio = (prev_minor / minor).sqrt();
        prev_minor = minor;
        out.push(BlockLambdaProduct {
            product,
            minor_ratio,
        });
    }
    Ok(out)
}

/// Outcome of a block-ordered canonical IPIP truncated at one position.
#[derive(Clone, Debug)]
pub struct BlockIpipOutcome<T: Scalar> {
    pub solution: IpipSolution<T>,
    /// `1 / <A_ii u_ij, u_ij>^{1/2}`, the diagonal-block lower bound.
    pub lower_bound: T,
    pub equality: bool,
}

impl<T: Scalar> BlockIpipOutcome<T> {
    /// The minimum norm; the problem is always feasible for PD kernels.
    pub fn lambda(&self) -> T {
        self.solution.norm.expect("PD block IPIP is feasible")
    }
}

/// Solve the canonical IPIP over the ordered family `{A u_{i'j'}}`
/// truncated at position `(i, j)` (1-based, lexicographic), and compare the
/// minimum norm against the diagonal-block lower bound.
///
/// When the bound is attained, the leading blocks `1..i-1` of `A u_ij` must
/// vanish; this is asserted.
pub fn block_ipip_min_norm<T: Scalar>(
    a: &BlockMatrix<T>,
    bases: &[Matrix<T>],
    index: (usize, usize),
) -> Result<BlockIpipOutcome<T>> {
    let partition = a.partition().clone();
    let (i, j) = index;
    if i == 0 || i > partition.block_count() || j == 0 || j > partition.size(i) {
        return Err(Error::IndexOutOfRange(format!(
            "block index ({i}, {j}) outside partition"
        )));
    }
    require_positive_definite(a.matrix())?;
    let u = assemble_block_basis(a, bases)?;
    let gram = scalarize(a.matrix(), &u)?;

    let position = partition.offset(i) + j;
    let truncated = gram.submatrix(0, 0, position, position);
    let b = Matrix::basis_column(position, position - 1);
    let coeff = lu_solve(&truncated, &b)?;
    let norm_sq = ambient_inner(&coeff, &b).re.max(T::zero());
    let lambda = norm_sq.sqrt();

    let u_ij = u.column(position - 1);
    let basis_vec = bases[i - 1].column(j - 1);
    let quad = ambient_inner(&a.diagonal_block(i).matmul(&basis_vec), &basis_vec).re;
    let lower_bound = T::one() / quad.sqrt();

    let tol = scalar::default_tol::<T>();
    let equality = (lambda - lower_bound).abs() <= tol * (T::one() + lower_bound);
    if equality && i > 1 {
        let image = a.matrix().matmul(&u_ij);
        let leading = image.submatrix(0, 0, partition.offset(i), 1);
        assert!(
            leading.frobenius_norm() <= tol.sqrt() * (T::one() + image.frobenius_norm()),
            "bound attained but leading components of A u_ij do not vanish"
        );
    }

    Ok(BlockIpipOutcome {
        solution: IpipSolution {
            feasible: true,
            coefficients: Some(coeff),
            norm: Some(lambda),
        },
        lower_bound,
        equality,
    })
}

/// Modified Gram-Schmidt on ambient columns. Errors when a pivot collapses,
/// i.e. the input is linearly dependent.
pub fn gram_schmidt<T: Scalar>(vectors: &[Matrix<T>]) -> Result<Vec<Matrix<T>>> {
    if vectors.is_empty() {
        return Err(Error::Dimension("empty vector list".into()));
    }
    let dim = vectors[0].rows();
    let mut out: Vec<Matrix<T>> = Vec::with_capacity(vectors.len());
    for a in vectors {
        if a.cols() != 1 || a.rows() != dim {
            return Err(Error::Dimension(
                "vectors must be equal-length columns".into(),
            ));
        }
        let mut v = a.clone();
        for f in &out {
            let proj = ambient_inner(&v, f);
            v = &v - &f.scale(proj);
        }
        let pivot = v.frobenius_norm();
        if pivot <= scalar::default_tol::<T>() * (T::one() + a.frobenius_norm()) {
            return Err(Error::RankDeficient);
        }
        out.push(v.scale(Complex::new(T::one() / pivot, T::zero())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::BlockPartition;
    use crate::scalar::creal;

    fn near(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn pd_gram() -> Matrix<f64> {
        Matrix::from_real_rows(&[vec![1., 1.], vec![1., 2.]])
    }

    #[test]
    fn solve_identity_gram() {
        let b = Matrix::real_column(&[0.5, -2., 1.]);
        let problem = IpipProblem::new(Matrix::<f64>::identity(3), b.clone()).unwrap();
        let sol = solve_ipip(&problem).unwrap();
        assert!(sol.feasible);
        let c = sol.coefficients.unwrap();
        assert!((&c - &b).frobenius_norm() < 1e-12);
        assert!(near(sol.norm.unwrap(), b.frobenius_norm(), 1e-12));
    }

    #[test]
    fn solve_two_by_two() {
        let problem = IpipProblem::new(pd_gram(), Matrix::real_column(&[0., 1.])).unwrap();
        let sol = solve_ipip(&problem).unwrap();
        assert!(sol.feasible);
        let c = sol.coefficients.unwrap();
        assert!((c[(0, 0)] - creal(-1.)).norm() < 1e-10);
        assert!((c[(1, 0)] - creal(1.)).norm() < 1e-10);
        assert!(near(sol.norm.unwrap(), 1., 1e-10));
    }

    #[test]
    fn infeasible_data_detected() {
        // ran G = span (1,1); b = (0,1) falls outside.
        let g = Matrix::from_real_rows(&[vec![1., 1.], vec![1., 1.]]);
        let problem = IpipProblem::new(g, Matrix::real_column(&[0., 1.])).unwrap();
        let sol = solve_ipip(&problem).unwrap();
        assert!(!sol.feasible);
        assert!(sol.coefficients.is_none());
    }

    #[test]
    fn bordered_examples() {
        let got = min_norm_bordered(&pd_gram(), &Matrix::real_column(&[0., 1.])).unwrap();
        assert!(near(got, 1., 1e-12));

        let got = min_norm_bordered(&Matrix::<f64>::identity(2), &Matrix::real_column(&[1., 0.]))
            .unwrap();
        assert!(near(got, 1., 1e-12));

        let got = min_norm_bordered(
            &Matrix::<f64>::from_real_rows(&[vec![4.]]),
            &Matrix::real_column(&[2.]),
        )
        .unwrap();
        assert!(near(got, 1., 1e-12));
    }

    #[test]
    fn bordered_rejects_singular() {
        let g = Matrix::from_real_rows(&[vec![1., 1.], vec![1., 1.]]);
        assert!(matches!(
            min_norm_bordered(&g, &Matrix::real_column(&[0., 1.])),
            Err(Error::SingularGram)
        ));
    }

    #[test]
    fn lambda_sequence_examples() {
        let l = lambda_sequence(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(l, vec![1., 1., 1.]);

        let l = lambda_sequence(&pd_gram()).unwrap();
        assert!(near(l[0], 1., 1e-12) && near(l[1], 1., 1e-12));

        let l = lambda_sequence(&Matrix::from_real_rows(&[vec![4., 0.], vec![0., 9.]])).unwrap();
        assert!(near(l[0], 0.5, 1e-12) && near(l[1], 1. / 3., 1e-12));

        let indef = Matrix::from_real_rows(&[vec![1., 2.], vec![2., 1.]]);
        assert!(lambda_sequence(&indef).is_err());
    }

    #[test]
    fn lambda_det_identity_examples() {
        let out = lambda_det_identity(&Matrix::<f64>::identity(4)).unwrap();
        assert!(near(out.product, 1., 1e-12));
        assert!(out.agree);

        let t = Matrix::from_real_rows(&[vec![2., 1.], vec![1., 2.]]);
        let out = lambda_det_identity(&t).unwrap();
        let expected = 1. / 3f64.sqrt();
        assert!(near(out.product, expected, 1e-12));
        assert!(near(out.inv_sqrt_det, expected, 1e-12));
        assert!(out.agree);
    }

    #[test]
    fn block_lambda_products_diagonal() {
        let t = BlockMatrix::new(
            Matrix::from_real_rows(&[
                vec![4., 0., 0., 0.],
                vec![0., 4., 0., 0.],
                vec![0., 0., 9., 0.],
                vec![0., 0., 0., 9.],
            ]),
            BlockPartition::new(vec![2, 2]).unwrap(),
        )
        .unwrap();
        let bases = vec![Matrix::<f64>::identity(2), Matrix::<f64>::identity(2)];
        let out = block_lambda_products(&t, &bases).unwrap();
        assert!(near(out[0].product, 0.25, 1e-12));
        assert!(near(out[0].minor_ratio, 0.25, 1e-12));
        assert!(near(out[1].product, 1. / 9., 1e-12));
        assert!(near(out[1].minor_ratio, 1. / 9., 1e-12));
    }

    #[test]
    fn block_lambda_identity_on_coupled_matrix() {
        let t = BlockMatrix::new(
            Matrix::<f64>::from_real_rows(&[
                vec![2., 0.5, 0.2],
                vec![0.5, 3., -0.4],
                vec![0.2, -0.4, 1.5],
            ]),
            BlockPartition::new(vec![2, 1]).unwrap(),
        )
        .unwrap();
        let bases = eigen_cons(&t).unwrap();
        for item in block_lambda_products(&t, &bases).unwrap() {
            assert!(
                (item.product - item.minor_ratio).abs() <= 1e-8 * (1. + item.minor_ratio),
                "{item:?}"
            );
        }
    }

    #[test]
    fn block_ipip_diagonal_cases() {
        let a = BlockMatrix::new(
            Matrix::from_real_rows(&[vec![2., 0.], vec![0., 3.]]),
            BlockPartition::scalar(2),
        )
        .unwrap();
        let bases = vec![Matrix::<f64>::identity(1), Matrix::<f64>::identity(1)];
        let out = block_ipip_min_norm(&a, &bases, (1, 1)).unwrap();
        assert!(near(out.lambda(), 1. / 2f64.sqrt(), 1e-12));
        assert!(near(out.lower_bound, 1. / 2f64.sqrt(), 1e-12));
        assert!(out.equality);

        let out = block_ipip_min_norm(&a, &bases, (2, 1)).unwrap();
        assert!(near(out.lambda(), 1. / 3f64.sqrt(), 1e-12));
        assert!(out.equality);
    }

    #[test]
    fn block_ipip_strict_case() {
        let a = BlockMatrix::new(
            Matrix::from_real_rows(&[vec![2., 1.], vec![1., 2.]]),
            BlockPartition::scalar(2),
        )
        .unwrap();
        let bases = vec![Matrix::<f64>::identity(1), Matrix::<f64>::identity(1)];
        let out = block_ipip_min_norm(&a, &bases, (2, 1)).unwrap();
        assert!(near(out.lambda(), (2f64 / 3.).sqrt(), 1e-12));
        assert!(near(out.lower_bound, 1. / 2f64.sqrt(), 1e-12));
        assert!(!out.equality);
        assert!(out.lambda() >= out.lower_bound - 1e-10);
    }

    #[test]
    fn block_ipip_index_validation() {
        let a = BlockMatrix::new(Matrix::<f64>::identity(2), BlockPartition::scalar(2)).unwrap();
        let bases = vec![Matrix::<f64>::identity(1), Matrix::<f64>::identity(1)];
        assert!(block_ipip_min_norm(&a, &bases, (3, 1)).is_err());
        assert!(block_ipip_min_norm(&a, &bases, (1, 2)).is_err());
    }

    #[test]
    fn gram_schmidt_examples() {
        let a1 = Matrix::real_column(&[1., 0.]);
        let a2 = Matrix::real_column(&[1., 1.]);
        let f = gram_schmidt(&[a1.clone(), a2.clone()]).unwrap();
        assert!((&f[0] - &a1).frobenius_norm() < 1e-12);
        assert!((&f[1] - &Matrix::real_column(&[0., 1.])).frobenius_norm() < 1e-12);

        // Orthonormal input is unchanged.
        let g = gram_schmidt(&f).unwrap();
        for (x, y) in f.iter().zip(&g) {
            assert!((x - y).frobenius_norm() < 1e-12);
        }

        assert!(matches!(
            gram_schmidt(&[a1.clone(), a1.scale_real(2.)]),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn minimum_norm_solution_matches_gram_schmidt() {
        // The canonical minimum-norm solution is the last Gram-Schmidt
        // vector scaled by the lambda ratio.
        let a1 = Matrix::real_column(&[1., 0.]);
        let a2 = Matrix::real_column(&[1., 1.]);
        let problem = IpipProblem::canonical(pd_gram(), 2).unwrap();
        let sol = solve_ipip(&problem).unwrap();
        let c = sol.coefficients.unwrap();
        let f = &a1.scale(c[(0, 0)]) + &a2.scale(c[(1, 0)]);
        let ortho = gram_schmidt(&[a1, a2]).unwrap();
        let lambda = lambda_sequence(&pd_gram()).unwrap()[1];
        let expected = ortho[1].scale_real(lambda);
        assert!((&f - &expected).frobenius_norm() < 1e-10);
    }

    #[test]
    fn scalarize_examples() {
        let t = Matrix::from_real_rows(&[vec![1., 0.], vec![0., 2.]]);
        assert_eq!(scalarize(&t, &Matrix::identity(2)).unwrap(), t);

        let swap = Matrix::from_real_rows(&[vec![0., 1.], vec![1., 0.]]);
        let got = scalarize(&t, &swap).unwrap();
        let want = Matrix::from_real_rows(&[vec![2., 0.], vec![0., 1.]]);
        assert!((&got - &want).frobenius_norm() < 1e-12);

        let skew = Matrix::from_real_rows(&[vec![1., 1.], vec![0., 1.]]);
        assert!(matches!(scalarize(&t, &skew), Err(Error::NotOrthonormal)));
    }

    #[test]
    fn scalarize_is_an_isometry() {
        let t = Matrix::<f64>::from_real_rows(&[
            vec![2., 0.4, 0.1],
            vec![0.4, 1.5, -0.3],
            vec![0.1, -0.3, 1.2],
        ]);
        // A unitary basis: eigenvectors of an unrelated Hermitian matrix.
        let h = Matrix::from_real_rows(&[
            vec![1., 0.7, 0.2],
            vec![0.7, -0.5, 0.9],
            vec![0.2, 0.9, 0.3],
        ]);
        let u = eigh(&h).unwrap().eigenvectors;
        let a = scalarize(&t, &u).unwrap();

        // Spectra agree under the basis change.
        let spec_t = eigh(&t).unwrap().eigenvalues;
        let spec_a = eigh(&a).unwrap().eigenvalues;
        for (x, y) in spec_t.iter().zip(&spec_a) {
            assert!((x - y).abs() < 1e-10);
        }

        // Range inner products agree on corresponding elements:
        // <x, y> in the T-space equals <U* x, U* y> in the A-space.
        let space_t = crate::rkhs::RkhsSpace::new(t.clone()).unwrap();
        let space_a = crate::rkhs::RkhsSpace::new(a).unwrap();
        let x = t.matmul(&Matrix::real_column(&[0.3, -1., 0.8]));
        let y = t.matmul(&Matrix::real_column(&[1.1, 0.2, -0.4]));
        let lhs = space_t.inner(&x, &y).unwrap();
        let ua = u.adjoint();
        let rhs = space_a.inner(&ua.matmul(&x), &ua.matmul(&y)).unwrap();
        assert!((lhs - rhs).norm() <= 1e-8 * (1. + lhs.norm()));
    }

    #[test]
    fn bordered_agrees_with_direct_solve() {
        let g = Matrix::from_real_rows(&[
            vec![2., 0.3, -0.1],
            vec![0.3, 1.5, 0.4],
            vec![-0.1, 0.4, 1.1],
        ]);
        let b = Matrix::column_vector(&[
            Complex::new(0.3, -0.2),
            Complex::new(1., 0.5),
            Complex::new(-0.7, 0.1),
        ]);
        let direct = solve_ipip(&IpipProblem::new(g.clone(), b.clone()).unwrap())
            .unwrap()
            .norm
            .unwrap();
        let bordered = min_norm_bordered(&g, &b).unwrap();
        assert!(near(bordered, direct * direct, 1e-10));
    }
}
