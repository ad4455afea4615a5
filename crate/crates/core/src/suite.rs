//! The randomized property suite.
//!
//! Every registered property is a pure function of a 64-bit seed and the
//! dimension cap, so any failure is replayable from its record alone.
//! Failures are data: the suite returns them sorted by seed instead of
//! aborting, and panics inside a property are caught and recorded.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use crate::error::Result;
use crate::gen::{gaussian_matrix, pd_matrix, psd_matrix, Rng};
use crate::hadamard::{
    extremal_simple_tensor_check, hadamard_min_norm_bound, hadamard_min_norm_candidate,
    khatri_rao, restriction_inequality_check, BlockFamily, TensorIndex,
};
use crate::ineq::{
    block_oppenheim_schur, block_oppenheim_schur_chain, block_ratio_inequality,
    elementary_inequality, fischer, hadamard_inequality, oppenheim, oppenheim_schur,
};
use crate::interp::{
    block_ipip_min_norm, block_lambda_products, eigen_cons, lambda_det_identity,
    min_norm_bordered, solve_ipip, IpipProblem,
};
use crate::matrix::{
    ambient_inner, eigh, lu_solve, moore_penrose, psd_check, BlockMatrix, BlockPartition,
    Definiteness, Matrix,
};
use crate::rkhs::{rkhs_sum_check, RkhsSpace};
use crate::scalar::{cone, czero, Scalar, C};

/// One reproducible property violation.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureRecord {
    pub property: String,
    pub seed: u64,
    pub digest: String,
    /// Slack of the violated comparison; negative by how much it failed.
    pub margin: f64,
}

/// Aggregate outcome; the suite passes exactly when `failures` is empty.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub trials: usize,
    pub failures: Vec<FailureRecord>,
    pub wall_time: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Violation {
    digest: String,
    margin: f64,
}

type Check = fn(&mut Rng, usize) -> Result<Option<Violation>>;

fn registry<T: Scalar>() -> Vec<(&'static str, Check)> {
    vec![
        ("eigh-reconstruction", check_eigh_reconstruction::<T>),
        ("determinant-cofactor-oracle", check_determinant_oracle::<T>),
        ("kronecker-determinant", check_kron_determinant::<T>),
        ("penrose-identities", check_penrose::<T>),
        ("psd-check-gram", check_psd_gram::<T>),
        ("rkhs-inner-product", check_rkhs_inner::<T>),
        ("pythagorean-sum", check_pythagorean::<T>),
        ("kernel-column-gram", check_kernel_column_gram::<T>),
        ("ipip-constraints", check_ipip_constraints::<T>),
        ("ipip-least-norm-oracle", check_ipip_oracle::<T>),
        ("ipip-minimality", check_ipip_minimality::<T>),
        ("bordered-vs-direct", check_bordered::<T>),
        ("lambda-det-identity", check_lambda_det::<T>),
        ("block-lambda-products", check_block_lambda::<T>),
        ("ordered-min-norm-lower-bound", check_lower_bound::<T>),
        ("khatri-rao-psd", check_khatri_rao::<T>),
        ("restriction-inequality", check_restriction::<T>),
        ("extremal-agreement", check_extremal_agreement::<T>),
        ("product-min-norm-bound", check_product_bound::<T>),
        ("elementary-enumeration-oracle", check_elementary_oracle::<T>),
        ("hadamard-inequality", check_hadamard_ineq::<T>),
        ("oppenheim-margin", check_oppenheim::<T>),
        ("oppenheim-schur-margin", check_oppenheim_schur::<T>),
        ("fischer-inequality", check_fischer::<T>),
        ("block-oppenheim-schur", check_block_os::<T>),
        ("block-ratio-chain", check_ratio_chain::<T>),
    ]
}

/// Names of all registered properties, in execution order.
pub fn property_names() -> Vec<&'static str> {
    registry::<f64>().into_iter().map(|(n, _)| n).collect()
}

fn trial_seed(master: u64, property: usize, trial: usize) -> u64 {
    let mut state = master
        ^ (property as u64).wrapping_mul(0xa076_1d64_78bd_642f)
        ^ (trial as u64).wrapping_mul(0xe703_7ed1_a0b4_28db);
    // One splitmix64 step decorrelates the lanes.
    state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Run every property `trials` times with dimensions capped by `max_dim`.
pub fn run_suite<T: Scalar>(trials: usize, seed: u64, max_dim: usize) -> SuiteResult {
    let start = Instant::now();
    let checks = registry::<T>();
    let mut failures = Vec::new();
    for (pidx, (name, check)) in checks.iter().enumerate() {
        for t in 0..trials {
            let s = trial_seed(seed, pidx, t);
            if let Some(rec) = run_check(name, *check, s, max_dim) {
                failures.push(rec);
            }
        }
    }
    failures.sort_by(|a, b| a.seed.cmp(&b.seed).then(a.property.cmp(&b.property)));
    SuiteResult {
        trials,
        failures,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

/// Replay a single property at a recorded seed.
pub fn run_property<T: Scalar>(name: &str, seed: u64, max_dim: usize) -> Option<FailureRecord> {
    let checks = registry::<T>();
    let (n, check) = checks.iter().find(|(n, _)| *n == name)?;
    run_check(n, *check, seed, max_dim)
}

fn run_check(
    name: &str,
    check: Check,
    seed: u64,
    max_dim: usize,
) -> Option<FailureRecord> {
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut rng = Rng::from_seed(seed);
        check(&mut rng, max_dim)
    }));
    let violation = match outcome {
        Ok(Ok(None)) => return None,
        Ok(Ok(Some(v))) => v,
        Ok(Err(e)) => Violation {
            digest: format!("error: {e}"),
            margin: f64::NAN,
        },
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .map(|s| s.as_str())
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            Violation {
                digest: format!("panic: {msg}"),
                margin: f64::NAN,
            }
        }
    };
    Some(FailureRecord {
        property: name.to_string(),
        seed,
        digest: violation.digest,
        margin: violation.margin,
    })
}

// ---------------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------------

fn digest<T: Scalar>(parts: &[&Matrix<T>]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bits: u64| {
        h ^= bits;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for m in parts {
        eat((m.rows() as u64) << 32 | m.cols() as u64);
        for z in m.entries() {
            eat(z.re.as_f64().to_bits());
            eat(z.im.as_f64().to_bits());
        }
    }
    format!("{h:016x}")
}

fn fail_below<T: Scalar>(slack: T, digest: String) -> Option<Violation> {
    if slack >= T::zero() {
        None
    } else {
        Some(Violation {
            digest,
            margin: slack.as_f64(),
        })
    }
}

fn pick_dim(rng: &mut Rng, max_dim: usize, cap: usize) -> usize {
    rng.uniform_range(2, max_dim.clamp(2, cap))
}

fn hermitian_from<T: Scalar>(rng: &mut Rng, n: usize) -> Matrix<T> {
    let g = gaussian_matrix::<T>(n, n, rng);
    let sym = &g + &g.adjoint();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            C::<T>::new(sym[(i, i)].re, T::zero())
        } else {
            sym[(i, j)]
        }
    })
}

/// Random partition with `s` blocks of size 1 or `max_block`.
fn random_partition(rng: &mut Rng, s: usize, max_block: usize) -> BlockPartition {
    let sizes = (0..s).map(|_| rng.uniform_range(1, max_block)).collect();
    BlockPartition::new(sizes).expect("positive sizes")
}

fn random_pd_family<T: Scalar>(
    rng: &mut Rng,
    m: usize,
    s: usize,
    max_block: usize,
) -> BlockFamily<T> {
    let factors = (0..m)
        .map(|_| {
            let partition = random_partition(rng, s, max_block);
            BlockMatrix::new(
                pd_matrix::<T>(partition.total(), rng, T::real(0.05)),
                partition,
            )
            .expect("sizes agree")
        })
        .collect();
    BlockFamily::new(factors).expect("families from PD factors are valid")
}

fn random_uniform_family<T: Scalar>(rng: &mut Rng, m: usize, s: usize, t_max: usize) -> BlockFamily<T> {
    let factors = (0..m)
        .map(|_| {
            let t = rng.uniform_range(1, t_max);
            let partition = BlockPartition::new(vec![t; s]).expect("positive");
            BlockMatrix::new(
                pd_matrix::<T>(partition.total(), rng, T::real(0.05)),
                partition,
            )
            .expect("sizes agree")
        })
        .collect();
    BlockFamily::new(factors).expect("families from PD factors are valid")
}

// ---------------------------------------------------------------------------
// matrix-core properties.
// ---------------------------------------------------------------------------

fn check_eigh_reconstruction<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 16);
    let h = hermitian_from::<T>(rng, n);
    let decomp = eigh(&h)?;
    let tol = T::real(1e-10);
    let rec = (&decomp.reconstruct() - &h).frobenius_norm();
    let ortho = (&decomp.eigenvectors.adjoint().matmul(&decomp.eigenvectors)
        - &Matrix::identity(n))
        .frobenius_norm();
    let slack = (tol * (T::one() + h.frobenius_norm()) - rec).min(tol - ortho);
    Ok(fail_below(slack, digest(&[&h])))
}

/// Cofactor expansion, the independent determinant route.
fn cofactor_det<T: Scalar>(m: &Matrix<T>) -> C<T> {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)];
    }
    let mut acc = czero();
    let mut sign = cone::<T>();
    for j in 0..n {
        let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
            let cc = if c < j { c } else { c + 1 };
            m[(r + 1, cc)]
        });
        acc += sign * m[(0, j)] * cofactor_det(&minor);
        sign = -sign;
    }
    acc
}

fn check_determinant_oracle<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 4);
    let m = gaussian_matrix::<T>(n, n, rng);
    let lu = crate::matrix::determinant(&m)?;
    let oracle = cofactor_det(&m);
    let slack = T::real(1e-9) * (T::one() + oracle.norm()) - (lu - oracle).norm();
    Ok(fail_below(slack, digest(&[&m])))
}

fn check_kron_determinant<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 3);
    let q = pick_dim(rng, max_dim, 3);
    let a = gaussian_matrix::<T>(n, n, rng);
    let b = gaussian_matrix::<T>(q, q, rng);
    let left = crate::matrix::determinant(&a.kronecker(&b))?;
    let da = crate::matrix::determinant(&a)?;
    let db = crate::matrix::determinant(&b)?;
    let right = da.powu(q as u32) * db.powu(n as u32);
    let slack = T::real(1e-8) * (T::one() + right.norm()) - (left - right).norm();
    Ok(fail_below(slack, digest(&[&a, &b])))
}

fn check_penrose<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let rows = rng.uniform_range(1, max_dim.max(2));
    let cols = rng.uniform_range(1, max_dim.max(2));
    let m = gaussian_matrix::<T>(rows, cols, rng);
    let p = moore_penrose(&m, T::real(1e-10))?;
    let scale = T::one() + m.frobenius_norm() + p.frobenius_norm();
    let tol = T::real(1e-8) * scale;
    let mp = m.matmul(&p);
    let pm = p.matmul(&m);
    let worst = [
        (&mp.matmul(&m) - &m).frobenius_norm(),
        (&pm.matmul(&p) - &p).frobenius_norm(),
        (&mp.adjoint() - &mp).frobenius_norm(),
        (&pm.adjoint() - &pm).frobenius_norm(),
    ]
    .into_iter()
    .fold(T::zero(), T::max);
    Ok(fail_below(tol - worst, digest(&[&m])))
}

fn check_psd_gram<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 16);
    let rank = rng.uniform_range(1, n);
    let m = psd_matrix::<T>(n, Some(rank), rng);
    match psd_check(&m, crate::scalar::psd_cutoff())? {
        Definiteness::Indefinite => Ok(Some(Violation {
            digest: digest(&[&m]),
            margin: -1.0,
        })),
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// rkhs-core properties.
// ---------------------------------------------------------------------------

fn check_rkhs_inner<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 8);
    let rank = rng.uniform_range(1, n);
    let a = psd_matrix::<T>(n, Some(rank), rng);
    let space = RkhsSpace::new(a.clone())?;
    let x = gaussian_matrix::<T>(n, 1, rng);
    let y = gaussian_matrix::<T>(n, 1, rng);
    let f = a.matmul(&x);
    let g = a.matmul(&y);
    let got = space.inner(&f, &g)?;
    let want = ambient_inner(&a.matmul(&x), &y);
    let slack = T::real(1e-8) * (T::one() + want.norm()) - (got - want).norm();
    Ok(fail_below(slack, digest(&[&a, &x, &y])))
}

fn check_pythagorean<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 8);
    let a = pd_matrix::<T>(n, rng, T::real(0.05));
    let b = pd_matrix::<T>(n, rng, T::real(0.05));
    let z1 = gaussian_matrix::<T>(n, 1, rng);
    let shared = rng.next_u64().is_multiple_of(2);
    let z2 = if shared {
        z1.clone()
    } else {
        gaussian_matrix::<T>(n, 1, rng)
    };
    let f = a.matmul(&z1);
    let g = b.matmul(&z2);
    let out = rkhs_sum_check(&a, &b, &f, &g)?;
    let tol = T::real(1e-9) * (T::one() + out.rhs);
    let mut slack = out.rhs + tol - out.lhs;
    if shared && !(out.equality && out.witness.is_some()) {
        slack = -T::one();
    }
    Ok(fail_below(slack, digest(&[&a, &b, &z1, &z2])))
}

fn check_kernel_column_gram<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 8);
    let a = pd_matrix::<T>(n, rng, T::real(0.05));
    let space = RkhsSpace::with_partition(a.clone(), BlockPartition::scalar(n))?;
    let elements: Vec<_> = (1..=n)
        .map(|i| space.element(space.kernel_column(i)?))
        .collect::<Result<_>>()?;
    let gram = crate::rkhs::gram_matrix(&elements)?;
    let slack =
        T::real(1e-10) * (T::one() + a.frobenius_norm()) - (&gram - &a).frobenius_norm();
    Ok(fail_below(slack, digest(&[&a])))
}

// ---------------------------------------------------------------------------
// interpolation properties.
// ---------------------------------------------------------------------------

fn check_ipip_constraints<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 8);
    let g = pd_matrix::<T>(n, rng, T::real(0.05));
    let b = gaussian_matrix::<T>(n, 1, rng);
    let sol = solve_ipip(&IpipProblem::new(g.clone(), b.clone())?)?;
    if !sol.feasible {
        return Ok(Some(Violation {
            digest: digest(&[&g, &b]),
            margin: -1.0,
        }));
    }
    let c = sol.coefficients.expect("feasible");
    let residual = (&g.matmul(&c) - &b).frobenius_norm();
    let slack = T::real(1e-8) * (T::one() + b.frobenius_norm()) - residual;
    // The two norm expressions must agree as well.
    let direct = ambient_inner(&c, &b).re;
    let quad = ambient_inner(&g.matmul(&c), &c).re;
    let slack2 = T::real(1e-8) * (T::one() + direct.abs()) - (direct - quad).abs();
    Ok(fail_below(slack.min(slack2), digest(&[&g, &b])))
}

fn check_ipip_oracle<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 4);
    let g = pd_matrix::<T>(n, rng, T::real(0.05));
    let b = gaussian_matrix::<T>(n, 1, rng);
    let sol = solve_ipip(&IpipProblem::new(g.clone(), b.clone())?)?;
    let c = sol.coefficients.expect("PD Gram is feasible");
    // Independent route: Gaussian elimination on the normal equations.
    let oracle = lu_solve(&g.adjoint().matmul(&g), &g.adjoint().matmul(&b))?;
    let slack =
        T::real(1e-7) * (T::one() + oracle.frobenius_norm()) - (&c - &oracle).frobenius_norm();
    Ok(fail_below(slack, digest(&[&g, &b])))
}

fn check_ipip_minimality<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    // Ambient family a_i, solution f = A c; adding any component from the
    // orthogonal complement of span{a_i} keeps the constraints and cannot
    // shrink the norm.
    let dim = pick_dim(rng, max_dim, 8).max(3);
    let count = rng.uniform_range(1, dim - 1);
    let a = gaussian_matrix::<T>(dim, count, rng);
    let gram = a.adjoint().matmul(&a);
    let b = gaussian_matrix::<T>(count, 1, rng);
    let sol = solve_ipip(&IpipProblem::new(gram.clone(), b.clone())?)?;
    if !sol.feasible {
        // Gram of generic columns is PD; treat infeasibility as failure.
        return Ok(Some(Violation {
            digest: digest(&[&a, &b]),
            margin: -1.0,
        }));
    }
    let f = a.matmul(&sol.coefficients.expect("feasible"));
    // Project a random direction onto the orthogonal complement.
    let w_raw = gaussian_matrix::<T>(dim, 1, rng);
    let proj = a.matmul(&moore_penrose(&a, T::real(1e-10))?);
    let w = &w_raw - &proj.matmul(&w_raw);
    let perturbed = &f + &w;
    // Constraints are unchanged...
    let drift = (&a.adjoint().matmul(&perturbed) - &a.adjoint().matmul(&f)).frobenius_norm();
    let slack1 = T::real(1e-8) * (T::one() + b.frobenius_norm()) - drift;
    // ...and the norm does not drop.
    let slack2 = perturbed.frobenius_norm() - f.frobenius_norm() + T::real(1e-10);
    Ok(fail_below(slack1.min(slack2), digest(&[&a, &b])))
}

fn check_bordered<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 6);
    let g = pd_matrix::<T>(n, rng, T::real(0.05));
    let b = gaussian_matrix::<T>(n, 1, rng);
    let direct = solve_ipip(&IpipProblem::new(g.clone(), b.clone())?)?
        .norm
        .expect("PD Gram is feasible");
    let bordered = min_norm_bordered(&g, &b)?;
    let slack =
        T::real(1e-8) * (T::one() + direct * direct) - (bordered - direct * direct).abs();
    Ok(fail_below(slack, digest(&[&g, &b])))
}

fn check_lambda_det<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 8);
    let t = pd_matrix::<T>(n, rng, T::real(0.05));
    let out = lambda_det_identity(&t)?;
    let det = crate::matrix::real_determinant(&t)?;
    let product_sq = out.product * out.product;
    let slack = T::real(1e-7) - (product_sq * det - T::one()).abs();
    Ok(fail_below(slack, digest(&[&t])))
}

fn check_block_lambda<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let s = rng.uniform_range(2, 3);
    let partition = random_partition(rng, s, (max_dim / s).clamp(1, 2));
    let t = BlockMatrix::new(
        pd_matrix::<T>(partition.total(), rng, T::real(0.05)),
        partition,
    )?;
    let bases = if rng.next_u64().is_multiple_of(2) {
        eigen_cons(&t)?
    } else {
        (1..=t.block_count())
            .map(|i| Matrix::identity(t.partition().size(i)))
            .collect()
    };
    let mut slack = T::infinity();
    for item in block_lambda_products(&t, &bases)? {
        let s_i =
            T::real(1e-7) * (T::one() + item.minor_ratio) - (item.product - item.minor_ratio).abs();
        slack = slack.min(s_i);
    }
    Ok(fail_below(slack, digest(&[t.matrix()])))
}

fn check_lower_bound<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let s = rng.uniform_range(2, 3);
    let partition = random_partition(rng, s, (max_dim / s).clamp(1, 2));
    let block_diagonal = rng.next_u64().is_multiple_of(2);
    let matrix = if block_diagonal {
        let mut m = Matrix::<T>::zeros(partition.total(), partition.total());
        for i in 1..=s {
            let d = pd_matrix::<T>(partition.size(i), rng, T::real(0.05));
            m.set_submatrix(partition.offset(i), partition.offset(i), &d);
        }
        m
    } else {
        pd_matrix::<T>(partition.total(), rng, T::real(0.05))
    };
    let a = BlockMatrix::new(matrix, partition)?;
    let bases = eigen_cons(&a)?;
    let i = rng.uniform_range(1, s);
    let j = rng.uniform_range(1, a.partition().size(i));
    let out = block_ipip_min_norm(&a, &bases, (i, j))?;
    let mut slack = out.lambda() - out.lower_bound + T::real(1e-10);
    if block_diagonal && !out.equality {
        slack = -T::one();
    }
    Ok(fail_below(slack, digest(&[a.matrix()])))
}

// ---------------------------------------------------------------------------
// hadamard-product properties.
// ---------------------------------------------------------------------------

fn check_khatri_rao<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let m = rng.uniform_range(2, 3);
    let s = rng.uniform_range(2, 3);
    let scalar_blocks = rng.next_u64().is_multiple_of(2);
    let family = if scalar_blocks {
        let factors = (0..m)
            .map(|_| {
                BlockMatrix::scalar_partitioned(psd_matrix::<T>(
                    s,
                    Some(rng.uniform_range(1, s)),
                    rng,
                ))
                .expect("square")
            })
            .collect();
        BlockFamily::new(factors)?
    } else {
        random_pd_family::<T>(rng, m, s, (max_dim / s).clamp(1, 2))
    };
    let kr = khatri_rao(&family)?;
    if psd_check(kr.matrix(), crate::scalar::psd_cutoff())? == Definiteness::Indefinite {
        return Ok(Some(Violation {
            digest: digest(&[kr.matrix()]),
            margin: -1.0,
        }));
    }
    if scalar_blocks {
        let mut entrywise = family.factors()[0].matrix().clone();
        for f in &family.factors()[1..] {
            entrywise = entrywise.hadamard(f.matrix())?;
        }
        let slack = T::real(1e-12) * (T::one() + entrywise.frobenius_norm())
            - (&entrywise - kr.matrix()).frobenius_norm();
        return Ok(fail_below(slack, digest(&[kr.matrix()])));
    }
    Ok(None)
}

fn check_restriction<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let s = rng.uniform_range(2, 3);
    let family = random_pd_family::<T>(rng, 2, s, (max_dim.min(6) / s).max(1));
    let dim = family.tensor_dim();
    let x = gaussian_matrix::<T>(dim, 1, rng);
    let mut kernel = family.factors()[0].matrix().clone();
    for f in &family.factors()[1..] {
        kernel = kernel.kronecker(f.matrix());
    }
    let tensor = kernel.matmul(&x);
    let out = restriction_inequality_check(&family, &tensor)?;
    let slack = out.tensor_norm + T::real(1e-9) * (T::one() + out.tensor_norm) - out.pullback_norm;
    Ok(fail_below(slack, digest(&[&tensor])))
}

fn check_extremal_agreement<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let s = rng.uniform_range(2, 3);
    let family = random_pd_family::<T>(rng, 2, s, (max_dim.min(6) / s).max(1));
    let make_extremal = rng.next_u64().is_multiple_of(2);
    let factors: Vec<Matrix<T>> = if make_extremal {
        let i = rng.uniform_range(1, s);
        family
            .factors()
            .iter()
            .map(|f| {
                let c = gaussian_matrix::<T>(f.partition().size(i), 1, rng);
                let mut embedded = Matrix::<T>::zeros(f.dim(), 1);
                embedded.set_submatrix(f.partition().offset(i), 0, &c);
                f.matrix().matmul(&embedded)
            })
            .collect()
    } else {
        family
            .factors()
            .iter()
            .map(|f| f.matrix().matmul(&gaussian_matrix::<T>(f.dim(), 1, rng)))
            .collect()
    };
    let structural = extremal_simple_tensor_check(&family, &factors)?;
    let tensor = factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f));
    let norms = restriction_inequality_check(&family, &tensor)?;
    if structural.extremal == norms.extremal {
        Ok(None)
    } else {
        Ok(Some(Violation {
            digest: digest(&[&tensor]),
            margin: -1.0,
        }))
    }
}

fn check_product_bound<T: Scalar>(rng: &mut Rng, _max_dim: usize) -> Result<Option<Violation>> {
    let m = rng.uniform_range(2, 3);
    let s = rng.uniform_range(2, 3);
    let family = random_pd_family::<T>(rng, m, s, 2);
    let bases: Vec<Vec<Matrix<T>>> = family
        .factors()
        .iter()
        .map(eigen_cons)
        .collect::<Result<_>>()?;
    let block = rng.uniform_range(1, s);
    let positions = (1..=m)
        .map(|p| rng.uniform_range(1, family.block_size(block, p)))
        .collect();
    let gamma = TensorIndex::new(block, positions);
    let out = hadamard_min_norm_bound(&family, &bases, &gamma)?;
    let tol = T::real(1e-7) * (T::one() + out.upper_bound);
    let mut slack = out.upper_bound + tol - out.lambda;
    if block == 1 && !out.equality {
        slack = -T::one();
    }

    // The candidate interpolates even away from equality, with norm at
    // least the minimum.
    let candidate = hadamard_min_norm_candidate(&family, &bases, &gamma)?;
    let kr = khatri_rao(&family)?;
    let space = RkhsSpace::new(kr.matrix().clone())?;
    let cnorm = space.norm(&candidate)?;
    let mut slack2 = cnorm - out.lambda + T::real(1e-7) * (T::one() + out.lambda);

    // Interpolation constraints of the candidate: zero against every
    // earlier product-basis column, one at gamma's position.
    let mut w_block = bases[0][block - 1].clone();
    for per_factor in &bases[1..] {
        w_block = w_block.kronecker(&per_factor[block - 1]);
    }
    let partition = kr.partition();
    let mut local = 0usize;
    for (p, &j) in gamma.positions.iter().enumerate() {
        local = local * family.block_size(block, p + 1) + (j - 1);
    }
    let position = partition.offset(block) + local;
    for delta in 0..=position {
        // Columns before gamma's block are product-basis columns of
        // earlier blocks; columns inside the block come from w_block.
        let (owner, offset) = (1..=block)
            .map(|i| (i, partition.offset(i)))
            .rev()
            .find(|&(_, off)| off <= delta)
            .expect("block containing delta");
        let mut w_owner = bases[0][owner - 1].clone();
        for per_factor in &bases[1..] {
            w_owner = w_owner.kronecker(&per_factor[owner - 1]);
        }
        let mut u = Matrix::<T>::zeros(kr.dim(), 1);
        u.set_submatrix(offset, 0, &w_owner.column(delta - offset));
        let got = ambient_inner(&candidate, &u);
        let want = if delta == position { T::one() } else { T::zero() };
        let dev = ((got.re - want).abs()).max(got.im.abs());
        slack2 = slack2.min(T::real(1e-7) - dev);
    }
    Ok(fail_below(
        slack.min(slack2),
        digest(&[kr.matrix(), &candidate]),
    ))
}

// ---------------------------------------------------------------------------
// determinant-inequality properties.
// ---------------------------------------------------------------------------

fn check_elementary_oracle<T: Scalar>(rng: &mut Rng, _max_dim: usize) -> Result<Option<Violation>> {
    let n = rng.uniform_range(1, 3);
    let m = rng.uniform_range(1, 3);
    let rows: Vec<Vec<T>> = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| T::one() + T::real(3.0) * rng.uniform::<T>())
                .collect()
        })
        .collect();
    let report = elementary_inequality(&rows, T::real(1e-9))?;

    // Subset-sum oracle.
    let mut sum_e = T::zero();
    let mut sum_f = T::zero();
    for mask in 0..(1u32 << (n * m)) {
        let on = |i: usize, j: usize| (mask >> (i * m + j)) & 1 == 1;
        let mut term = T::one();
        for (i, row) in rows.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if on(i, j) {
                    term *= a - T::one();
                }
            }
        }
        if (0..n).any(|i| (0..m).all(|j| on(i, j))) {
            sum_e += term;
        }
        if (0..m).all(|j| (0..n).any(|i| on(i, j))) {
            sum_f += term;
        }
    }
    let gap = report.lhs - report.rhs;
    let oracle_gap = sum_f - sum_e;
    let scale = T::one() + report.lhs.abs() + report.rhs.abs();
    let slack = (T::real(1e-9) * scale - (gap - oracle_gap).abs())
        .min(if report.holds { T::zero() } else { -T::one() })
        .min(oracle_gap + T::real(1e-12) * scale);
    let dg = format!("{n}x{m}:{}", rows
        .iter()
        .flat_map(|r| r.iter().map(|a| format!("{:.6e}", a.as_f64())))
        .collect::<Vec<_>>()
        .join(","));
    Ok(fail_below(slack, dg))
}

fn check_hadamard_ineq<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 6);
    let a = psd_matrix::<T>(n, Some(rng.uniform_range(1, n)), rng);
    let r = hadamard_inequality(&a, T::real(1e-9))?;
    let slack = if r.holds { T::zero() } else { r.margin };
    Ok(fail_below(slack, digest(&[&a])))
}

fn check_oppenheim<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 6);
    let a = psd_matrix::<T>(n, Some(rng.uniform_range(1, n)), rng);
    let b = psd_matrix::<T>(n, Some(rng.uniform_range(1, n)), rng);
    let r = oppenheim(&a, &b, T::real(1e-9))?;
    let slack = if r.holds { T::zero() } else { r.margin };
    Ok(fail_below(slack, digest(&[&a, &b])))
}

fn check_oppenheim_schur<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let n = pick_dim(rng, max_dim, 6);
    let full_rank = rng.next_u64().is_multiple_of(2);
    let (a, b) = if full_rank {
        (
            pd_matrix::<T>(n, rng, T::real(0.05)),
            pd_matrix::<T>(n, rng, T::real(0.05)),
        )
    } else {
        (
            psd_matrix::<T>(n, Some(rng.uniform_range(1, n)), rng),
            psd_matrix::<T>(n, Some(rng.uniform_range(1, n)), rng),
        )
    };
    let r = oppenheim_schur(&a, &b, T::real(1e-9))?;
    let mut slack = if r.holds { T::zero() } else { r.margin };
    if n == 2 && full_rank && !r.equality {
        slack = -T::one();
    }
    Ok(fail_below(slack, digest(&[&a, &b])))
}

fn check_fischer<T: Scalar>(rng: &mut Rng, max_dim: usize) -> Result<Option<Violation>> {
    let s = rng.uniform_range(2, 3);
    let partition = random_partition(rng, s, (max_dim / s).clamp(1, 2));
    let block_diagonal = rng.next_u64().is_multiple_of(4);
    let matrix = if block_diagonal {
        let mut m = Matrix::<T>::zeros(partition.total(), partition.total());
        for i in 1..=s {
            let d = pd_matrix::<T>(partition.size(i), rng, T::real(0.05));
            m.set_submatrix(partition.offset(i), partition.offset(i), &d);
        }
        m
    } else {
        pd_matrix::<T>(partition.total(), rng, T::real(0.05))
    };
    let a = BlockMatrix::new(matrix, partition)?;
    let r = fischer(&a, T::real(1e-9))?;
    let mut slack = if r.holds { T::zero() } else { r.margin };
    if block_diagonal && !r.equality {
        slack = -T::one();
    }
    Ok(fail_below(slack, digest(&[a.matrix()])))
}

fn check_block_os<T: Scalar>(rng: &mut Rng, _max_dim: usize) -> Result<Option<Violation>> {
    let m = rng.uniform_range(2, 3);
    let s = rng.uniform_range(2, 3);
    let family = random_uniform_family::<T>(rng, m, s, 2);
    let r = block_oppenheim_schur(&family, T::real(1e-7))?;
    let mut slack = if r.holds { T::zero() } else { r.margin };
    let scale = T::one() + r.lhs.abs() + r.rhs.abs();

    // Scalar partitions must agree with the scalar route.
    if m == 2 && family.uniform_sizes()?.iter().all(|&t| t == 1) {
        let scalar = oppenheim_schur(
            family.factors()[0].matrix(),
            family.factors()[1].matrix(),
            T::real(1e-9),
        )?;
        let drift = ((r.lhs - r.rhs) - (scalar.lhs - scalar.rhs)).abs();
        slack = slack.min(T::real(1e-12) * scale - drift);
    }
    Ok(fail_below(slack, digest(&[family.factors()[0].matrix()])))
}

fn check_ratio_chain<T: Scalar>(rng: &mut Rng, _max_dim: usize) -> Result<Option<Violation>> {
    let m = rng.uniform_range(2, 3);
    let s = rng.uniform_range(2, 3);
    let family = random_uniform_family::<T>(rng, m, s, 2);
    let mut slack = T::infinity();
    let mut rhs_product = T::one();
    for i in 1..=s {
        let r = block_ratio_inequality(&family, i, T::real(1e-7))?;
        slack = slack.min(if r.holds { T::zero() } else { r.margin });
        if i == 1 {
            let case_a = r.equality
                && r.equality_case
                    .as_deref()
                    .map(|c| c.starts_with("(a)"))
                    .unwrap_or(false);
            if !case_a {
                slack = -T::one();
            }
        }
        rhs_product *= r.rhs;
    }
    // Composing the per-block bounds stays between det and the final rhs,
    // and equals the intermediate bound computed the direct way.
    let chain = block_oppenheim_schur_chain(&family)?;
    let scale = T::one() + chain.lhs.abs() + chain.intermediate.abs() + chain.rhs.abs();
    slack = slack
        .min(chain.lhs - rhs_product + T::real(1e-7) * scale)
        .min(rhs_product - chain.rhs + T::real(1e-7) * scale)
        .min(T::real(1e-7) * scale - (rhs_product - chain.intermediate).abs());
    Ok(fail_below(slack, digest(&[family.factors()[0].matrix()])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_suite_passes() {
        let result = run_suite::<f64>(2, 0, 3);
        assert_eq!(result.trials, 2);
        assert!(
            result.passed(),
            "unexpected failures: {:?}",
            result.failures
        );
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_suite::<f64>(2, 9, 4);
        let b = run_suite::<f64>(2, 9, 4);
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.trials, b.trials);
    }

    #[test]
    fn property_replay_matches() {
        for name in property_names() {
            let once = run_property::<f64>(name, 1234, 4);
            let twice = run_property::<f64>(name, 1234, 4);
            assert_eq!(once, twice, "{name}");
        }
    }

    #[test]
    fn unknown_property_is_none() {
        assert!(run_property::<f64>("no-such-property", 1, 4).is_none());
    }
}
