use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Symmetric partition `(n_1, ..., n_s)` of a square matrix into blocks with
/// square diagonal blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    sizes: Vec<usize>,
}

impl BlockPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Dimension(
                "block sizes must be a nonempty list of positive counts".into(),
            ));
        }
        Ok(BlockPartition { sizes })
    }

    /// Scalar partition `(1, ..., 1)` of dimension `n`.
    pub fn scalar(n: usize) -> Self {
        BlockPartition { sizes: vec![1; n] }
    }

    /// Number of blocks `s`.
    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size `n_i` of block `i` (1-based).
    pub fn size(&self, i: usize) -> usize {
        self.sizes[i - 1]
    }

    /// Offset of block `i` (1-based) into the flat index space.
    pub fn offset(&self, i: usize) -> usize {
        self.sizes[..i - 1].iter().sum()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_scalar(&self) -> bool {
        self.sizes.iter().all(|&n| n == 1)
    }

    /// `Some(t)` when every block has the same size `t`.
    pub fn uniform_size(&self) -> Option<usize> {
        let t = self.sizes[0];
        self.sizes.iter().all(|&n| n == t).then_some(t)
    }
}

/// Square matrix together with a symmetric block partition.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix<T: Scalar> {
    data: Matrix<T>,
    partition: BlockPartition,
}

impl<T: Scalar> BlockMatrix<T> {
    pub fn new(data: Matrix<T>, partition: BlockPartition) -> Result<Self> {
        data.require_square()?;
        if data.rows() != partition.total() {
            return Err(Error::Dimension(format!(
                "partition totals {} but matrix is {}x{}",
                partition.total(),
                data.rows(),
                data.cols()
            )));
        }
        Ok(BlockMatrix { data, partition })
    }

    /// Treat a square matrix as scalar-partitioned.
    pub fn scalar_partitioned(data: Matrix<T>) -> Result<Self> {
        data.require_square()?;
        let n = data.rows();
        Self::new(data, BlockPartition::scalar(n))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.data
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn block_count(&self) -> usize {
        self.partition.block_count()
    }

    pub fn dim(&self) -> usize {
        self.data.rows()
    }

    /// Block `(i, j)` (1-based), an `n_i x n_j` matrix.
    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        self.data.submatrix(
            self.partition.offset(i),
            self.partition.offset(j),
            self.partition.size(i),
            self.partition.size(j),
        )
    }

    pub fn diagonal_block(&self, i: usize) -> Matrix<T> {
        self.block(i, i)
    }
}

/// Top-left submatrix spanning blocks `1..=i`; `i = 0` yields the 1x1 matrix
/// `[1]` so that determinant chains can start from `det = 1`.
pub fn leading_principal_block<T: Scalar>(x: &BlockMatrix<T>, i: usize) -> Result<Matrix<T>> {
    let s = x.block_count();
    if i > s {
        return Err(Error::IndexOutOfRange(format!(
            "leading block index {i} exceeds block count {s}"
        )));
    }
    if i == 0 {
        return Ok(Matrix::identity(1));
    }
    let n: usize = x.partition().sizes()[..i].iter().sum();
    Ok(x.matrix().submatrix(0, 0, n, n))
}
