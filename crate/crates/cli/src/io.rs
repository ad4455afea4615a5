//! JSON file formats and output documents.
//!
//! Matrix files are
//! `{"rows": n, "cols": n, "partition": [n_1, ...], "entries": [[[re, im], ...], ...]}`
//! with row-major entries and an optional partition; family files wrap a
//! list of matrix objects under `"factors"`. Numbers are IEEE-754 doubles
//! printed in shortest round-trip form.

use serde::{Deserialize, Serialize};

use blockdet_core::hadamard::BlockFamily;
use blockdet_core::ineq::InequalityReport;
use blockdet_core::interp::IpipSolution;
use blockdet_core::matrix::{BlockMatrix, BlockPartition};
use blockdet_core::suite::SuiteResult;
use blockdet_core::{Complex64, Matrix64};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub factors: Vec<MatrixFile>,
}

pub fn matrix_from_file(file: &MatrixFile) -> Result<Matrix64, String> {
    if file.rows == 0 || file.cols == 0 {
        return Err("rows and cols must be positive".into());
    }
    if file.entries.len() != file.rows {
        return Err(format!(
            "entries has {} rows, header says {}",
            file.entries.len(),
            file.rows
        ));
    }
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.cols {
            return Err(format!(
                "row {} has {} entries, header says {}",
                i,
                row.len(),
                file.cols
            ));
        }
    }
    Ok(Matrix64::from_fn(file.rows, file.cols, |i, j| {
        Complex64::new(file.entries[i][j][0], file.entries[i][j][1])
    }))
}

/// Matrix plus its partition; a missing partition means scalar blocks.
pub fn block_from_file(file: &MatrixFile) -> Result<BlockMatrix<f64>, String> {
    let matrix = matrix_from_file(file)?;
    let partition = match &file.partition {
        Some(sizes) => BlockPartition::new(sizes.clone()).map_err(|e| e.to_string())?,
        None => BlockPartition::scalar(matrix.rows()),
    };
    BlockMatrix::new(matrix, partition).map_err(|e| e.to_string())
}

pub fn family_from_file(file: &FamilyFile) -> Result<BlockFamily<f64>, String> {
    let factors = file
        .factors
        .iter()
        .map(block_from_file)
        .collect::<Result<Vec<_>, _>>()?;
    BlockFamily::new(factors).map_err(|e| e.to_string())
}

pub fn matrix_to_file(m: &Matrix64, partition: Option<&BlockPartition>) -> MatrixFile {
    MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        partition: partition.map(|p| p.sizes().to_vec()),
        entries: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect(),
    }
}

pub fn family_to_file(family: &BlockFamily<f64>) -> FamilyFile {
    FamilyFile {
        factors: family
            .factors()
            .iter()
            .map(|f| matrix_to_file(f.matrix(), Some(f.partition())))
            .collect(),
    }
}

/// Column-vector file (an `n x 1` matrix object).
pub fn column_from_file(file: &MatrixFile) -> Result<Matrix64, String> {
    let m = matrix_from_file(file)?;
    if m.cols() != 1 {
        return Err(format!("expected a column vector, got {}x{}", m.rows(), m.cols()));
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Output documents.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct ReportDoc {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    pub equality: bool,
    pub equality_case: Option<String>,
    pub tol: f64,
}

impl From<InequalityReport<f64>> for ReportDoc {
    fn from(r: InequalityReport<f64>) -> Self {
        ReportDoc {
            name: r.name.to_string(),
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            holds: r.holds,
            equality: r.equality,
            equality_case: r.equality_case,
            tol: r.tol_used,
        }
    }
}

#[derive(Serialize)]
pub struct InterpDoc {
    pub feasible: bool,
    pub coefficients: Option<Vec<[f64; 2]>>,
    pub norm: Option<f64>,
    /// Squared norm by the bordered determinant; absent for singular Grams.
    pub norm_sq_bordered: Option<f64>,
}

impl InterpDoc {
    pub fn new(solution: IpipSolution<f64>, bordered: Option<f64>) -> Self {
        InterpDoc {
            feasible: solution.feasible,
            coefficients: solution
                .coefficients
                .map(|c| (0..c.rows()).map(|i| [c[(i, 0)].re, c[(i, 0)].im]).collect()),
            norm: solution.norm,
            norm_sq_bordered: bordered,
        }
    }
}

#[derive(Serialize)]
pub struct LambdaDoc {
    pub lambda: Vec<f64>,
}

#[derive(Serialize)]
pub struct ExtremalDoc {
    pub extremal: bool,
    pub witness_block: Option<usize>,
    pub tensor_norm: f64,
    pub pullback_norm: f64,
}

#[derive(Serialize)]
pub struct FailureDoc {
    pub property: String,
    pub seed: u64,
    pub digest: String,
    pub margin: f64,
}

#[derive(Serialize)]
pub struct SuiteDoc {
    pub trials: usize,
    pub passed: bool,
    pub failures: Vec<FailureDoc>,
    /// Wall-clock seconds; the only nondeterministic field.
    pub wall_time: f64,
}

impl From<SuiteResult> for SuiteDoc {
    fn from(r: SuiteResult) -> Self {
        SuiteDoc {
            trials: r.trials,
            passed: r.passed(),
            failures: r
                .failures
                .into_iter()
                .map(|f| FailureDoc {
                    property: f.property,
                    seed: f.seed,
                    digest: f.digest,
                    margin: f.margin,
                })
                .collect(),
            wall_time: r.wall_time,
        }
    }
}
