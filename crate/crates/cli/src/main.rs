//! `blockdet` - checks for determinant inequalities of positive
//! semidefinite (block) matrices, minimum-norm interpolation queries,
//! deterministic instance generation, and a randomized property suite.
//!
//! Every invocation prints exactly one JSON document on standard output.
//! Exit codes: 0 when the verdict is positive (inequality holds, problem
//! feasible, suite clean), 1 on a negative verdict, 2 on usage or input
//! errors (diagnostics go to standard error).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use blockdet_core::gen::{generate, GenKind, GenSpec, Generated};
use blockdet_core::hadamard::{
    extremal_simple_tensor_check, restriction_inequality_check,
};
use blockdet_core::ineq::{
    block_oppenheim_schur, block_ratio_inequality, elementary_inequality, fischer,
    hadamard_inequality, oppenheim, oppenheim_schur, FixtureKind,
};
use blockdet_core::interp::{lambda_sequence, min_norm_bordered, solve_ipip, IpipProblem};
use blockdet_core::suite::run_suite;

use blockdet_cli::io::{
    block_from_file, column_from_file, family_from_file, family_to_file, matrix_from_file,
    matrix_to_file, ExtremalDoc, FamilyFile, InterpDoc, LambdaDoc, MatrixFile, ReportDoc,
    SuiteDoc,
};

#[derive(Parser)]
#[command(name = "blockdet", version, about = "Determinant inequalities for block matrices")]
struct Cli {
    /// Relative tolerance for holds/equality verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an inequality and report both sides.
    Check {
        #[command(subcommand)]
        target: CheckTarget,
    },
    /// Solve an inner-product interpolation problem against a Gram matrix.
    Interp(InterpArgs),
    /// Minimum norms of the canonical problems: lambda_k over leading minors.
    Lambda(LambdaArgs),
    /// Extremality of a simple tensor under the diagonal restriction.
    Extremal(ExtremalArgs),
    /// Generate a seeded matrix, block matrix, or fixture family.
    Gen(GenArgs),
    /// Run the randomized property suite.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum CheckTarget {
    /// Inequalities for plain (scalar-entry) matrices.
    Scalar(ScalarArgs),
    /// The block inequality for a family of uniformly partitioned factors.
    Block(BlockArgs),
    /// The per-block determinant-ratio inequality.
    Ratio(RatioArgs),
}

#[derive(Args)]
struct ScalarArgs {
    #[arg(long, value_enum)]
    op: ScalarOp,
    /// First operand (matrix JSON file).
    #[arg(long)]
    a: PathBuf,
    /// Second operand, where the inequality takes two.
    #[arg(long)]
    b: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarOp {
    Hadamard,
    Oppenheim,
    OppenheimSchur,
    Elementary,
}

#[derive(Args)]
struct BlockArgs {
    #[arg(long, value_enum, default_value_t = BlockOp::OppenheimSchur)]
    op: BlockOp,
    /// Family file (for the block Oppenheim-Schur form).
    #[arg(long)]
    family: Option<PathBuf>,
    /// Partitioned matrix file (for Fischer's inequality).
    #[arg(long)]
    a: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BlockOp {
    OppenheimSchur,
    Fischer,
}

#[derive(Args)]
struct RatioArgs {
    #[arg(long)]
    family: PathBuf,
    /// Block index (1-based).
    #[arg(long)]
    i: usize,
}

#[derive(Args)]
struct InterpArgs {
    /// Gram matrix file.
    #[arg(long)]
    gram: PathBuf,
    /// Data vector file (n x 1 matrix).
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
struct LambdaArgs {
    /// Positive definite matrix file.
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Args)]
struct ExtremalArgs {
    /// Family of positive definite factors.
    #[arg(long)]
    family: PathBuf,
    /// One column-vector file per factor, in order.
    #[arg(long = "factor", required = true)]
    factors: Vec<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKindArg,
    /// Dimension for psd/pd kinds.
    #[arg(long)]
    dim: Option<usize>,
    /// Rank for the psd kind (defaults to full).
    #[arg(long)]
    rank: Option<usize>,
    /// Comma-separated block sizes for the pd-block kind.
    #[arg(long, value_delimiter = ',')]
    partition: Option<Vec<usize>>,
    /// Relative diagonal shift for pd kinds.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Fixture shape for the fixture kind.
    #[arg(long, value_enum)]
    fixture: Option<FixtureArg>,
    /// Factor count for fixtures.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Block count for fixtures.
    #[arg(long, default_value_t = 3)]
    s: usize,
    /// Uniform block size for fixtures.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Arrow-pair row (1-based).
    #[arg(long, default_value_t = 1)]
    i: usize,
    /// Arrow-pair column (1-based).
    #[arg(long, default_value_t = 2)]
    j: usize,
    /// Mediating block for chain fixtures (1-based).
    #[arg(long, default_value_t = 1)]
    i0: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKindArg {
    Psd,
    Pd,
    PdBlock,
    Fixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureArg {
    BlockDiagonal,
    ArrowPair,
    SchurChain,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 6)]
    max_dim: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn emit<T: Serialize>(doc: &T) {
    println!("{}", serde_json::to_string(doc).expect("serializable output"));
}

fn verdict(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn execute(cli: Cli) -> Result<ExitCode, String> {
    let tol = cli.tol;
    match cli.command {
        Command::Check { target } => check(target, tol),
        Command::Interp(args) => interp(args),
        Command::Lambda(args) => {
            let file: MatrixFile = read_json(&args.matrix)?;
            let matrix = matrix_from_file(&file)?;
            let lambda = lambda_sequence(&matrix).map_err(|e| e.to_string())?;
            emit(&LambdaDoc { lambda });
            Ok(ExitCode::SUCCESS)
        }
        Command::Extremal(args) => extremal(args),
        Command::Gen(args) => gen(args, cli.seed),
        Command::Suite(args) => {
            let result = run_suite::<f64>(args.trials, cli.seed, args.max_dim);
            let doc = SuiteDoc::from(result);
            let passed = doc.passed;
            emit(&doc);
            Ok(verdict(passed))
        }
    }
}

fn check(target: CheckTarget, tol: f64) -> Result<ExitCode, String> {
    let report = match target {
        CheckTarget::Scalar(args) => {
            let a_file: MatrixFile = read_json(&args.a)?;
            match args.op {
                ScalarOp::Hadamard => {
                    let a = matrix_from_file(&a_file)?;
                    hadamard_inequality(&a, tol).map_err(|e| e.to_string())?
                }
                ScalarOp::Elementary => {
                    let rows = real_entries(&a_file)?;
                    elementary_inequality(&rows, tol).map_err(|e| e.to_string())?
                }
                ScalarOp::Oppenheim | ScalarOp::OppenheimSchur => {
                    let b_path = args
                        .b
                        .ok_or_else(|| "this inequality needs --b".to_string())?;
                    let b_file: MatrixFile = read_json(&b_path)?;
                    let a = matrix_from_file(&a_file)?;
                    let b = matrix_from_file(&b_file)?;
                    match args.op {
                        ScalarOp::Oppenheim => oppenheim(&a, &b, tol).map_err(|e| e.to_string())?,
                        _ => oppenheim_schur(&a, &b, tol).map_err(|e| e.to_string())?,
                    }
                }
            }
        }
        CheckTarget::Block(args) => match args.op {
            BlockOp::OppenheimSchur => {
                let path = args
                    .family
                    .ok_or_else(|| "block oppenheim-schur needs --family".to_string())?;
                let file: FamilyFile = read_json(&path)?;
                let family = family_from_file(&file)?;
                block_oppenheim_schur(&family, tol).map_err(|e| e.to_string())?
            }
            BlockOp::Fischer => {
                let path = args
                    .a
                    .ok_or_else(|| "fischer needs --a with a partitioned matrix".to_string())?;
                let file: MatrixFile = read_json(&path)?;
                let block = block_from_file(&file)?;
                fischer(&block, tol).map_err(|e| e.to_string())?
            }
        },
        CheckTarget::Ratio(args) => {
            let file: FamilyFile = read_json(&args.family)?;
            let family = family_from_file(&file)?;
            block_ratio_inequality(&family, args.i, tol).map_err(|e| e.to_string())?
        }
    };
    let doc = ReportDoc::from(report);
    let holds = doc.holds;
    emit(&doc);
    Ok(verdict(holds))
}

fn real_entries(file: &MatrixFile) -> Result<Vec<Vec<f64>>, String> {
    let m = matrix_from_file(file)?;
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let z = m[(i, j)];
            if z.im != 0.0 {
                return Err(format!("entry ({i}, {j}) must be real, got imaginary part {}", z.im));
            }
            row.push(z.re);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn interp(args: InterpArgs) -> Result<ExitCode, String> {
    let gram_file: MatrixFile = read_json(&args.gram)?;
    let data_file: MatrixFile = read_json(&args.data)?;
    let gram = matrix_from_file(&gram_file)?;
    let data = column_from_file(&data_file)?;
    let problem = IpipProblem::new(gram.clone(), data.clone()).map_err(|e| e.to_string())?;
    let solution = solve_ipip(&problem).map_err(|e| e.to_string())?;
    let bordered = min_norm_bordered(&gram, &data).ok();
    let feasible = solution.feasible;
    emit(&InterpDoc::new(solution, bordered));
    Ok(verdict(feasible))
}

fn extremal(args: ExtremalArgs) -> Result<ExitCode, String> {
    let family_file: FamilyFile = read_json(&args.family)?;
    let family = family_from_file(&family_file)?;
    let factors = args
        .factors
        .iter()
        .map(|p| read_json::<MatrixFile>(p).and_then(|f| column_from_file(&f)))
        .collect::<Result<Vec<_>, _>>()?;
    let structural = extremal_simple_tensor_check(&family, &factors).map_err(|e| e.to_string())?;
    let tensor = factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f));
    let norms = restriction_inequality_check(&family, &tensor).map_err(|e| e.to_string())?;
    emit(&ExtremalDoc {
        extremal: structural.extremal,
        witness_block: structural.witness_block,
        tensor_norm: norms.tensor_norm,
        pullback_norm: norms.pullback_norm,
    });
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs, seed: u64) -> Result<ExitCode, String> {
    let kind = match args.kind {
        GenKindArg::Psd => GenKind::Psd {
            dim: args.dim.ok_or_else(|| "psd needs --dim".to_string())?,
            rank: args.rank,
        },
        GenKindArg::Pd => GenKind::Pd {
            dim: args.dim.ok_or_else(|| "pd needs --dim".to_string())?,
        },
        GenKindArg::PdBlock => GenKind::PdBlock {
            sizes: args
                .partition
                .ok_or_else(|| "pd-block needs --partition".to_string())?,
        },
        GenKindArg::Fixture => {
            let fixture = match args
                .fixture
                .ok_or_else(|| "fixture kind needs --fixture".to_string())?
            {
                FixtureArg::BlockDiagonal => FixtureKind::BlockDiagonal,
                FixtureArg::ArrowPair => FixtureKind::ArrowPair {
                    i: args.i,
                    j: args.j,
                },
                FixtureArg::SchurChain => FixtureKind::SchurChain { i0: args.i0 },
            };
            GenKind::EqualityFixture {
                fixture,
                m: args.m,
                s: args.s,
                t: args.t,
            }
        }
    };
    let spec = GenSpec {
        kind,
        seed,
        epsilon: args.epsilon,
    };
    match generate::<f64>(&spec).map_err(|e| e.to_string())? {
        Generated::Matrix(m) => emit(&matrix_to_file(&m, None)),
        Generated::Block(b) => emit(&matrix_to_file(b.matrix(), Some(b.partition()))),
        Generated::Family(f) => emit(&family_to_file(&f)),
    }
    Ok(ExitCode::SUCCESS)
}
