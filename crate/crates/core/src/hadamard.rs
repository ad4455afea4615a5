//! Hadamard products of block-partitioned kernels.
//!
//! A family `A^1, ..., A^m` of PSD block matrices sharing a block count `s`
//! (block sizes may differ per factor) spans a tensor space with kernel
//! `A^1 (x) ... (x) A^m`. Restricting tensors to the diagonal blocks - the
//! pullback along `i -> (i, ..., i)` - lands in the space whose kernel is
//! the blockwise Kronecker (Khatri-Rao) product, and can only shrink norms.
//! The minimum norm of the ordered interpolation problem in the product
//! space is bounded by per-factor data; both the bound and its explicit
//! minimizer live here.

use crate::error::{Error, Result};
use crate::interp::{assemble_block_basis, block_ipip_min_norm};
use crate::matrix::{
    ambient_inner, moore_penrose, require_positive_definite, require_psd, BlockMatrix,
    BlockPartition, Matrix,
};
use crate::rkhs::RkhsSpace;
use crate::scalar::{self, Scalar};

/// Factors `A^1..A^m`, Hermitian PSD, sharing the block count `s`.
#[derive(Clone, Debug)]
pub struct BlockFamily<T: Scalar> {
    factors: Vec<BlockMatrix<T>>,
}

impl<T: Scalar> BlockFamily<T> {
    pub fn new(factors: Vec<BlockMatrix<T>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Dimension("a family needs at least one factor".into()));
        }
        let s = factors[0].block_count();
        if factors.iter().any(|f| f.block_count() != s) {
            return Err(Error::MismatchedBlocks);
        }
        for f in &factors {
            f.matrix().require_hermitian()?;
            require_psd(f.matrix())?;
        }
        Ok(BlockFamily { factors })
    }

    pub fn factors(&self) -> &[BlockMatrix<T>] {
        &self.factors
    }

    /// Number of factors `m`.
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Shared block count `s`.
    pub fn block_count(&self) -> usize {
        self.factors[0].block_count()
    }

    /// Size `n_{ip}` of block `i` in factor `p` (both 1-based).
    pub fn block_size(&self, i: usize, p: usize) -> usize {
        self.factors[p - 1].partition().size(i)
    }

    /// Partition of the product space: block `i` has size `prod_p n_{ip}`.
    pub fn product_partition(&self) -> BlockPartition {
        let s = self.block_count();
        let sizes = (1..=s)
            .map(|i| (1..=self.factor_count()).map(|p| self.block_size(i, p)).product())
            .collect();
        BlockPartition::new(sizes).expect("positive block sizes")
    }

    /// Dimension of the full tensor space `prod_p dim C^p`.
    pub fn tensor_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    /// Uniform block size `t_p` per factor, or an error when some factor
    /// has unequal block sizes.
    pub fn uniform_sizes(&self) -> Result<Vec<usize>> {
        self.factors
            .iter()
            .map(|f| f.partition().uniform_size().ok_or(Error::NonUniformBlocks))
            .collect()
    }

    fn require_positive_definite(&self) -> Result<()> {
        for f in &self.factors {
            require_positive_definite(f.matrix())?;
        }
        Ok(())
    }
}

/// Index `gamma = (i, j_1, ..., j_m)`: a common block and one basis
/// position per factor, all 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorIndex {
    pub block: usize,
    pub positions: Vec<usize>,
}

impl TensorIndex {
    pub fn new(block: usize, positions: Vec<usize>) -> Self {
        TensorIndex { block, positions }
    }

    fn validate<T: Scalar>(&self, family: &BlockFamily<T>) -> Result<()> {
        if self.block == 0 || self.block > family.block_count() {
            return Err(Error::IndexOutOfRange(format!(
                "block {} of {}",
                self.block,
                family.block_count()
            )));
        }
        if self.positions.len() != family.factor_count() {
            return Err(Error::IndexOutOfRange(format!(
                "{} positions for {} factors",
                self.positions.len(),
                family.factor_count()
            )));
        }
        for (p, &j) in self.positions.iter().enumerate() {
            let n = family.block_size(self.block, p + 1);
            if j == 0 || j > n {
                return Err(Error::IndexOutOfRange(format!(
                    "position {j} in block {} of factor {} (size {n})",
                    self.block,
                    p + 1
                )));
            }
        }
        Ok(())
    }

    /// Lexicographic position (1-based) of `(j_1, ..., j_m)` inside its
    /// block, with `j_1` the most significant digit.
    fn local_position<T: Scalar>(&self, family: &BlockFamily<T>) -> usize {
        let mut pos = 0;
        for (p, &j) in self.positions.iter().enumerate() {
            pos = pos * family.block_size(self.block, p + 1) + (j - 1);
        }
        pos + 1
    }
}

/// Blockwise Kronecker product `(A^1_ij (x) ... (x) A^m_ij)_{ij}` - the
/// kernel of the product space. PSD whenever every factor is.
pub fn khatri_rao<T: Scalar>(family: &BlockFamily<T>) -> Result<BlockMatrix<T>> {
    let s = family.block_count();
    let partition = family.product_partition();
    let mut out = Matrix::zeros(partition.total(), partition.total());
    for i in 1..=s {
        for j in 1..=s {
            let mut block = family.factors[0].block(i, j);
            for factor in &family.factors[1..] {
                block = block.kronecker(&factor.block(i, j));
            }
            out.set_submatrix(partition.offset(i), partition.offset(j), &block);
        }
    }
    BlockMatrix::new(out, partition)
}

/// The Hadamard product `f_1 * ... * f_m` of ambient columns: block `i` of
/// the output is the Kronecker product of the block-`i` segments.
pub fn diagonal_pullback<T: Scalar>(
    family: &BlockFamily<T>,
    factors: &[Matrix<T>],
) -> Result<Matrix<T>> {
    if factors.len() != family.factor_count() {
        return Err(Error::Dimension(format!(
            "{} columns for {} factors",
            factors.len(),
            family.factor_count()
        )));
    }
    for (p, f) in factors.iter().enumerate() {
        let want = family.factors[p].dim();
        if f.cols() != 1 || f.rows() != want {
            return Err(Error::Dimension(format!(
                "factor {} column must be {want}x1, got {}x{}",
                p + 1,
                f.rows(),
                f.cols()
            )));
        }
    }
    let partition = family.product_partition();
    let mut out = Matrix::zeros(partition.total(), 1);
    for i in 1..=family.block_count() {
        let mut block = segment(&factors[0], family.factors[0].partition(), i);
        for (p, f) in factors.iter().enumerate().skip(1) {
            block = block.kronecker(&segment(f, family.factors[p].partition(), i));
        }
        out.set_submatrix(partition.offset(i), 0, &block);
    }
    Ok(out)
}

fn segment<T: Scalar>(column: &Matrix<T>, partition: &BlockPartition, i: usize) -> Matrix<T> {
    column.submatrix(partition.offset(i), 0, partition.size(i), 1)
}

/// Restriction of a tensor-space element to the diagonal, with both norms.
#[derive(Clone, Debug)]
pub struct RestrictionCheck<T: Scalar> {
    pub tensor_norm: T,
    pub pullback_norm: T,
    pub extremal: bool,
    pub pullback: Matrix<T>,
}

/// Extract the diagonal multi-indexed coordinates of a full tensor-space
/// column: the pullback along `i -> (i, ..., i)`.
pub fn pullback_column<T: Scalar>(
    family: &BlockFamily<T>,
    tensor: &Matrix<T>,
) -> Result<Matrix<T>> {
    let dim = family.tensor_dim();
    if tensor.cols() != 1 || tensor.rows() != dim {
        return Err(Error::Dimension(format!(
            "tensor column must be {dim}x1, got {}x{}",
            tensor.rows(),
            tensor.cols()
        )));
    }
    let m = family.factor_count();
    // Stride of factor p in the mixed-radix tensor coordinate (factor 1
    // is the most significant digit).
    let mut strides = vec![1usize; m];
    for p in (0..m - 1).rev() {
        strides[p] = strides[p + 1] * family.factors[p + 1].dim();
    }
    let partition = family.product_partition();
    let mut out = Matrix::zeros(partition.total(), 1);
    for i in 1..=family.block_count() {
        let sizes: Vec<usize> = (1..=m).map(|p| family.block_size(i, p)).collect();
        let count: usize = sizes.iter().product();
        for local in 0..count {
            // Decode the local mixed-radix offset per factor.
            let mut rem = local;
            let mut global = 0;
            for p in (0..m).rev() {
                let o = rem % sizes[p];
                rem /= sizes[p];
                global += strides[p] * (family.factors[p].partition().offset(i) + o);
            }
            out[(partition.offset(i) + local, 0)] = tensor[(global, 0)];
        }
    }
    Ok(out)
}

/// Compare the norm of an in-range tensor against the norm of its diagonal
/// restriction; the restriction never grows the norm, and equality marks
/// the element as extremal.
pub fn restriction_inequality_check<T: Scalar>(
    family: &BlockFamily<T>,
    tensor: &Matrix<T>,
) -> Result<RestrictionCheck<T>> {
    let mut kernel = family.factors[0].matrix().clone();
    for factor in &family.factors[1..] {
        kernel = kernel.kronecker(factor.matrix());
    }
    let tensor_space = RkhsSpace::new(kernel)?;
    let tensor_norm = tensor_space.norm(tensor)?;

    let pullback = pullback_column(family, tensor)?;
    let kr = khatri_rao(family)?;
    let kr_space = RkhsSpace::new(kr.into_matrix())?;
    let pullback_norm = kr_space.norm(&pullback)?;

    let tol = scalar::default_tol::<T>();
    assert!(
        pullback_norm <= tensor_norm + tol * (T::one() + tensor_norm),
        "restriction grew the norm: {} > {}",
        pullback_norm.as_f64(),
        tensor_norm.as_f64()
    );
    let extremal = (tensor_norm - pullback_norm).abs() <= tol * (T::one() + tensor_norm);
    Ok(RestrictionCheck {
        tensor_norm,
        pullback_norm,
        extremal,
        pullback,
    })
}

/// Structural extremality test for a simple tensor `f_1 (x) ... (x) f_m`.
#[derive(Clone, Debug)]
pub struct ExtremalCheck {
    pub extremal: bool,
    pub witness_block: Option<usize>,
}

/// A simple tensor of nonzero factors is extremal exactly when some block
/// `i` has every `f_p` inside the column space of the kernel block column
/// `k_i^p`; the witness block is returned when found.
pub fn extremal_simple_tensor_check<T: Scalar>(
    family: &BlockFamily<T>,
    factors: &[Matrix<T>],
) -> Result<ExtremalCheck> {
    if family.factor_count() < 2 {
        return Err(Error::Dimension("extremality needs at least two factors".into()));
    }
    family.require_positive_definite()?;
    if factors.len() != family.factor_count() {
        return Err(Error::Dimension(format!(
            "{} columns for {} factors",
            factors.len(),
            family.factor_count()
        )));
    }
    for (p, f) in factors.iter().enumerate() {
        let want = family.factors[p].dim();
        if f.cols() != 1 || f.rows() != want {
            return Err(Error::Dimension(format!(
                "factor {} column must be {want}x1",
                p + 1
            )));
        }
        if f.frobenius_norm() == T::zero() {
            return Err(Error::ZeroFactor);
        }
    }

    let tol = scalar::range_tol::<T>();
    'blocks: for i in 1..=family.block_count() {
        for (p, f) in factors.iter().enumerate() {
            let factor = &family.factors[p];
            let col = factor.matrix().submatrix(
                0,
                factor.partition().offset(i),
                factor.dim(),
                factor.partition().size(i),
            );
            let projector = col.matmul(&moore_penrose(&col, scalar::psd_cutoff())?);
            let residual = (&projector.matmul(f) - f).frobenius_norm();
            if residual > tol * (T::one() + f.frobenius_norm()) {
                continue 'blocks;
            }
        }
        return Ok(ExtremalCheck {
            extremal: true,
            witness_block: Some(i),
        });
    }
    Ok(ExtremalCheck {
        extremal: false,
        witness_block: None,
    })
}

/// Minimum norm of the product-space ordered problem at `gamma`, with the
/// per-factor upper bound and, at equality, the explicit minimizer.
#[derive(Clone, Debug)]
pub struct HadamardMinNorm<T: Scalar> {
    pub lambda: T,
    pub upper_bound: T,
    pub equality: bool,
    pub minimizer: Option<Matrix<T>>,
}

/// Validate that each per-block basis is orthonormal and that the kernel
/// columns it induces form an orthogonal system (eigenbases of the
/// diagonal blocks always do).
fn require_orthogonal_system<T: Scalar>(
    family: &BlockFamily<T>,
    bases: &[Vec<Matrix<T>>],
) -> Result<()> {
    if bases.len() != family.factor_count() {
        return Err(Error::Dimension(format!(
            "{} basis sets for {} factors",
            bases.len(),
            family.factor_count()
        )));
    }
    let tol = scalar::range_tol::<T>();
    for (p, per_block) in bases.iter().enumerate() {
        let factor = &family.factors[p];
        for i in 1..=family.block_count() {
            let basis = &per_block[i - 1];
            let aii = factor.diagonal_block(i);
            let m = aii.matmul(basis);
            for j in 0..basis.cols() {
                for j2 in 0..basis.cols() {
                    if j == j2 {
                        continue;
                    }
                    let ip = ambient_inner(&m.column(j), &basis.column(j2));
                    if ip.norm() > tol * (T::one() + aii.frobenius_norm()) {
                        return Err(Error::NotOrthonormal);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Per-block bases for the product space: the Kronecker products of the
/// per-factor bases, ordered with factor 1 most significant.
fn product_bases<T: Scalar>(family: &BlockFamily<T>, bases: &[Vec<Matrix<T>>]) -> Vec<Matrix<T>> {
    (1..=family.block_count())
        .map(|i| {
            let mut w = bases[0][i - 1].clone();
            for per_block in &bases[1..] {
                w = w.kronecker(&per_block[i - 1]);
            }
            w
        })
        .collect()
}

/// The interpolation candidate built from per-factor minimizers and kernel
/// columns, already normalized. Under the orthogonal-system hypothesis it
/// satisfies the order-`gamma` constraints whether or not it is minimal.
pub fn hadamard_min_norm_candidate<T: Scalar>(
    family: &BlockFamily<T>,
    bases: &[Vec<Matrix<T>>],
    gamma: &TensorIndex,
) -> Result<Matrix<T>> {
    family.require_positive_definite()?;
    gamma.validate(family)?;
    require_orthogonal_system(family, bases)?;
    let (candidate, _, _) = candidate_parts(family, bases, gamma)?;
    Ok(candidate)
}

fn candidate_parts<T: Scalar>(
    family: &BlockFamily<T>,
    bases: &[Vec<Matrix<T>>],
    gamma: &TensorIndex,
) -> Result<(Matrix<T>, T, T)> {
    let i = gamma.block;
    let m = family.factor_count();
    let mut lambda_product = T::one();
    let mut alpha_product = T::one();
    let mut alpha_minus_product = T::one();
    let mut scaled_columns = Vec::with_capacity(m);
    let mut complements = Vec::with_capacity(m);

    for p in 1..=m {
        let factor = &family.factors[p - 1];
        let j = gamma.positions[p - 1];
        let out = block_ipip_min_norm(factor, &bases[p - 1], (i, j))?;
        let lambda_p = out.lambda();
        let basis_vec = bases[p - 1][i - 1].column(j - 1);
        let quad = ambient_inner(&factor.diagonal_block(i).matmul(&basis_vec), &basis_vec).re;
        let alpha = lambda_p * lambda_p * quad;
        lambda_product *= lambda_p;
        alpha_product *= alpha;
        alpha_minus_product *= alpha - T::one();

        // Kernel column applied to the basis vector, as an ambient column.
        let mut embedded = Matrix::zeros(factor.dim(), 1);
        embedded.set_submatrix(factor.partition().offset(i), 0, &basis_vec);
        let kernel_vec = factor.matrix().matmul(&embedded);

        // Ambient minimum-norm solution of the per-factor problem.
        let coeff = out.solution.coefficients.expect("feasible");
        let u = assemble_block_basis(factor, &bases[p - 1])?;
        let truncated = u.submatrix(0, 0, factor.dim(), coeff.rows());
        let f_p = factor.matrix().matmul(&truncated.matmul(&coeff));

        let scaled = kernel_vec.scale_real(lambda_p * lambda_p);
        complements.push(&scaled - &f_p);
        scaled_columns.push(scaled);
    }

    let denom = alpha_product - alpha_minus_product;
    let first = diagonal_pullback(family, &scaled_columns)?;
    let second = diagonal_pullback(family, &complements)?;
    let candidate = (&first - &second).scale_real(T::one() / denom);
    let bound = lambda_product / denom.sqrt();
    Ok((candidate, bound, denom))
}

/// Solve the product-space ordered problem at `gamma` and compare against
/// the per-factor bound. At equality the explicit minimizer is constructed
/// and verified to interpolate with norm `lambda_gamma`.
pub fn hadamard_min_norm_bound<T: Scalar>(
    family: &BlockFamily<T>,
    bases: &[Vec<Matrix<T>>],
    gamma: &TensorIndex,
) -> Result<HadamardMinNorm<T>> {
    family.require_positive_definite()?;
    gamma.validate(family)?;
    require_orthogonal_system(family, bases)?;

    let kr = khatri_rao(family)?;
    let product_basis = product_bases(family, bases);
    let local = gamma.local_position(family);
    let kr_out = block_ipip_min_norm(&kr, &product_basis, (gamma.block, local))?;
    let lambda = kr_out.lambda();

    let (candidate, upper_bound, _) = candidate_parts(family, bases, gamma)?;

    let tol = T::real(1e-7);
    assert!(
        lambda <= upper_bound + tol * (T::one() + upper_bound),
        "product-space minimum norm exceeded its bound"
    );
    let equality = (lambda - upper_bound).abs() <= tol * (T::one() + upper_bound);

    let minimizer = if equality {
        verify_candidate(family, &kr, &product_basis, gamma, &candidate, lambda)?;
        Some(candidate)
    } else {
        None
    };
    Ok(HadamardMinNorm {
        lambda,
        upper_bound,
        equality,
        minimizer,
    })
}

/// Check the interpolation constraints and norm of a candidate minimizer.
fn verify_candidate<T: Scalar>(
    family: &BlockFamily<T>,
    kr: &BlockMatrix<T>,
    product_basis: &[Matrix<T>],
    gamma: &TensorIndex,
    candidate: &Matrix<T>,
    lambda: T,
) -> Result<()> {
    let u = assemble_block_basis(kr, product_basis)?;
    let position = kr.partition().offset(gamma.block) + gamma.local_position(family);
    let tol = T::real(1e-7).sqrt();
    for delta in 1..=position {
        // <cand, KR u_delta> in the product space equals u_delta* cand.
        let got = ambient_inner(candidate, &u.column(delta - 1));
        let want = if delta == position { T::one() } else { T::zero() };
        assert!(
            (got.re - want).abs() <= tol && got.im.abs() <= tol,
            "candidate misses interpolation constraint {delta}"
        );
    }
    let space = RkhsSpace::new(kr.matrix().clone())?;
    let norm = space.norm(candidate)?;
    assert!(
        (norm - lambda).abs() <= tol * (T::one() + lambda),
        "candidate norm {} differs from minimum {}",
        norm.as_f64(),
        lambda.as_f64()
    );
    Ok(())
}
