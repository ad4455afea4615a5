//! Deterministic random instances: seeded PSD/PD matrices, block matrices,
//! families, and the equality-case fixtures.
//!
//! The generator is fixed so that failure seeds are portable: a 64-bit
//! xoshiro256** stream seeded splitmix-style from a single `u64`, complex
//! Gaussian entries via Box-Muller. Identical seeds give bit-identical
//! output on every build.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hadamard::BlockFamily;
use crate::ineq::{equality_case_constructor, FixtureKind};
use crate::matrix::{BlockMatrix, BlockPartition, Matrix};
use crate::scalar::{Scalar, C};

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// xoshiro256** seeded by expanding a 64-bit seed with splitmix64.
#[derive(Clone, Debug)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        let mut state = seed;
        let s = [
            splitmix64(&mut state),
            splitmix64(&mut state),
            splitmix64(&mut state),
            splitmix64(&mut state),
        ];
        Rng { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn uniform<T: Scalar>(&mut self) -> T {
        let x = self.next_u64() >> 11;
        T::real(x as f64 * (1.0 / 9007199254740992.0))
    }

    /// Integer in `[lo, hi]`.
    pub fn uniform_range(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Standard normal pair by Box-Muller.
    pub fn gaussian_pair<T: Scalar>(&mut self) -> (T, T) {
        let u1: T = T::one() - self.uniform::<T>();
        let u2: T = self.uniform();
        let r = (-(T::one() + T::one()) * u1.ln()).sqrt();
        let theta = T::real(std::f64::consts::TAU) * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Complex standard Gaussian: one Box-Muller pair as (re, im).
    pub fn complex_gaussian<T: Scalar>(&mut self) -> C<T> {
        let (re, im) = self.gaussian_pair();
        Complex::new(re, im)
    }

    /// Derive an independent child seed.
    pub fn child_seed(&mut self) -> u64 {
        self.next_u64()
    }
}

/// Matrix of iid complex Gaussian entries, row-major fill order.
pub fn gaussian_matrix<T: Scalar>(rows: usize, cols: usize, rng: &mut Rng) -> Matrix<T> {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.complex_gaussian();
        }
    }
    m
}

/// PSD matrix `B* B` with `B` of shape `rank x n`; rank defaults to `n`.
pub fn psd_matrix<T: Scalar>(n: usize, rank: Option<usize>, rng: &mut Rng) -> Matrix<T> {
    let r = rank.unwrap_or(n).max(1);
    let b = gaussian_matrix::<T>(r, n, rng);
    let m = b.adjoint().matmul(&b);
    // Exact Hermitian symmetry for downstream checks.
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(m[(i, i)].re, T::zero())
        } else if i < j {
            m[(i, j)]
        } else {
            m[(j, i)].conj()
        }
    })
}

/// PD matrix `B* B + eps |B* B|_F I`.
pub fn pd_matrix<T: Scalar>(n: usize, rng: &mut Rng, eps: T) -> Matrix<T> {
    let base = psd_matrix::<T>(n, None, rng);
    let shift = eps * base.frobenius_norm();
    &base + &Matrix::identity(n).scale_real(shift)
}

/// PD block matrix over the given partition.
pub fn pd_block<T: Scalar>(partition: &BlockPartition, rng: &mut Rng, eps: T) -> BlockMatrix<T> {
    let m = pd_matrix::<T>(partition.total(), rng, eps);
    BlockMatrix::new(m, partition.clone()).expect("dimensions match by construction")
}

/// Family of PD factors over per-factor partitions sharing a block count.
pub fn pd_family<T: Scalar>(
    partitions: &[BlockPartition],
    rng: &mut Rng,
    eps: T,
) -> Result<BlockFamily<T>> {
    let factors = partitions
        .iter()
        .map(|p| pd_block::<T>(p, rng, eps))
        .collect();
    BlockFamily::new(factors)
}

/// What to generate.
#[derive(Clone, Debug)]
pub enum GenKind {
    Psd { dim: usize, rank: Option<usize> },
    Pd { dim: usize },
    PdBlock { sizes: Vec<usize> },
    EqualityFixture { fixture: FixtureKind, m: usize, s: usize, t: usize },
}

/// A fully seeded generation request; the seed determines the output bits.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub kind: GenKind,
    pub seed: u64,
    /// Diagonal shift for PD kinds, relative to the Frobenius norm.
    pub epsilon: f64,
}

impl GenSpec {
    pub fn new(kind: GenKind, seed: u64) -> Self {
        GenSpec {
            kind,
            seed,
            epsilon: 1e-3,
        }
    }
}

/// Generated instance.
#[derive(Clone, Debug)]
pub enum Generated<T: Scalar> {
    Matrix(Matrix<T>),
    Block(BlockMatrix<T>),
    Family(BlockFamily<T>),
}

pub fn generate<T: Scalar>(spec: &GenSpec) -> Result<Generated<T>> {
    let mut rng = Rng::from_seed(spec.seed);
    let eps = T::real(spec.epsilon);
    match &spec.kind {
        GenKind::Psd { dim, rank } => {
            if *dim == 0 {
                return Err(Error::Dimension("dimension must be positive".into()));
            }
            if let Some(r) = rank {
                if *r == 0 || *r > *dim {
                    return Err(Error::Dimension(format!("rank {r} out of 1..={dim}")));
                }
            }
            Ok(Generated::Matrix(psd_matrix::<T>(*dim, *rank, &mut rng)))
        }
        GenKind::Pd { dim } => {
            if *dim == 0 {
                return Err(Error::Dimension("dimension must be positive".into()));
            }
            Ok(Generated::Matrix(pd_matrix::<T>(*dim, &mut rng, eps)))
        }
        GenKind::PdBlock { sizes } => {
            let partition = BlockPartition::new(sizes.clone())?;
            Ok(Generated::Block(pd_block::<T>(&partition, &mut rng, eps)))
        }
        GenKind::EqualityFixture { fixture, m, s, t } => Ok(Generated::Family(
            equality_case_constructor::<T>(fixture, *m, *s, *t, spec.seed)?,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{psd_check, Definiteness};
    use crate::scalar::psd_cutoff;

    #[test]
    fn deterministic_per_seed() {
        let spec = GenSpec::new(GenKind::Pd { dim: 3 }, 1);
        let a = match generate::<f64>(&spec).unwrap() {
            Generated::Matrix(m) => m,
            _ => unreachable!(),
        };
        let b = match generate::<f64>(&spec).unwrap() {
            Generated::Matrix(m) => m,
            _ => unreachable!(),
        };
        assert_eq!(a, b);

        let other = GenSpec::new(GenKind::Pd { dim: 3 }, 2);
        let c = match generate::<f64>(&other).unwrap() {
            Generated::Matrix(m) => m,
            _ => unreachable!(),
        };
        assert_ne!(a, c);
    }

    #[test]
    fn pd_generation_is_pd() {
        for seed in [1u64, 9, 203] {
            let spec = GenSpec::new(GenKind::Pd { dim: 3 }, seed);
            let m = match generate::<f64>(&spec).unwrap() {
                Generated::Matrix(m) => m,
                _ => unreachable!(),
            };
            assert_eq!(
                psd_check(&m, psd_cutoff()).unwrap(),
                Definiteness::PositiveDefinite
            );
        }
    }

    #[test]
    fn rank_controls_spectrum() {
        let spec = GenSpec::new(
            GenKind::Psd {
                dim: 4,
                rank: Some(2),
            },
            5,
        );
        let m = match generate::<f64>(&spec).unwrap() {
            Generated::Matrix(m) => m,
            _ => unreachable!(),
        };
        let eigs = crate::matrix::eigh(&m).unwrap().eigenvalues;
        let cutoff = 1e-10 * m.frobenius_norm();
        let above = eigs.iter().filter(|&&l| l > cutoff).count();
        assert_eq!(above, 2);
        assert_eq!(
            psd_check(&m, psd_cutoff()).unwrap(),
            Definiteness::PositiveSemidefinite
        );
    }

    #[test]
    fn uniform_stays_in_unit_interval() {
        let mut rng = Rng::from_seed(7);
        for _ in 0..1000 {
            let x: f64 = rng.uniform();
            assert!((0. ..1.).contains(&x));
        }
    }

    #[test]
    fn gaussians_have_sane_moments() {
        let mut rng = Rng::from_seed(11);
        let n = 20_000;
        let mut sum = 0.;
        let mut sum_sq = 0.;
        for _ in 0..n {
            let (a, b): (f64, f64) = rng.gaussian_pair();
            sum += a + b;
            sum_sq += a * a + b * b;
        }
        let mean = sum / (2 * n) as f64;
        let var = sum_sq / (2 * n) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.).abs() < 0.05, "variance {var}");
    }
}
