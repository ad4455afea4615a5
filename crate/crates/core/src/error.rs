use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not positive semidefinite")]
    NotPositiveSemidefinite,

    #[error("Gram matrix is singular")]
    SingularGram,

    #[error("vector lies outside the operator range (residual {residual:.3e})")]
    OutOfRange { residual: f64 },

    #[error("operation requires a block partition but none is attached")]
    MissingPartition,

    #[error("elements belong to different spaces")]
    MixedSpaces,

    #[error("input vectors are linearly dependent")]
    RankDeficient,

    #[error("basis is not orthonormal within tolerance")]
    NotOrthonormal,

    #[error("entry {0} is below one")]
    EntryBelowOne(String),

    #[error("factor vector is zero")]
    ZeroFactor,

    #[error("factors do not share a common block count")]
    MismatchedBlocks,

    #[error("block sizes are not uniform within a factor")]
    NonUniformBlocks,

    #[error("instance generation failed: {0}")]
    Generation(String),
}

pub type Result<V> = std::result::Result<V, Error>;
