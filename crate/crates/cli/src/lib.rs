//! The `minctrl` command-line tool.
//!
//! Every subcommand returns a [`CommandOutcome`]: a JSON payload carrying a
//! `schema_version` field plus one of the exit statuses in [`ExitStatus`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use minctrl_core::experiments::{run_experiment, ExperimentConfig, ExperimentReport};
use minctrl_core::greedy::{
    deterministic_greedy_vector_with, greedy_diagonal_with, randomized_greedy_vector_with,
};
use minctrl_core::linalg::{read_matrix, MatrixFile};
use minctrl_core::oracles::{
    brute_force_hitting_set_with, brute_force_min_diagonal_support_with,
    brute_force_min_vector_support_with, OracleLimits,
};
use minctrl_core::reductions::{IndexMap, PairColumn};
use minctrl_core::{
    build_reduction, build_symmetric_extension, HittingSetInstance, OracleResult, RankBackend,
    RankEvaluator, RankOptions, SolveResult,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 42;
/// Environment variable holding the default `--backend`.
pub const BACKEND_ENV: &str = "MINCTRL_BACKEND";
/// `auto` picks the exact backend up to this dimension, PBH above it.
pub const AUTO_EXACT_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    /// Not controllable, or no feasible input found.
    Infeasible = 1,
    InvalidInput = 2,
    Internal = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub status: ExitStatus,
    pub payload: Value,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: minctrl_core::Error,
    },
    #[error(transparent)]
    Core(#[from] minctrl_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        use minctrl_core::Error as E;
        let core = match self {
            CliError::Input { source, .. } | CliError::Core(source) => source,
            CliError::Output { .. } => return ExitStatus::Internal,
        };
        match core {
            E::Numeric { .. } | E::Internal(_) => ExitStatus::Internal,
            _ => ExitStatus::InvalidInput,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "minctrl",
    version,
    about = "Sparse inputs that make linear systems controllable"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a greedy solver on a system matrix.
    Solve(SolveArgs),
    /// Compile a hitting-set instance into controllability matrices.
    Reduce(ReduceArgs),
    /// Brute-force optimum for a small instance.
    Oracle(OracleArgs),
    /// Random-digraph experiment from a JSON config.
    Experiment(ExperimentArgs),
    /// Kalman rank test for a given input.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vector,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Rand,
    Det,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    /// Exact up to dimension 20, PBH above.
    Auto,
    Svd,
    Pbh,
    Exact,
}

impl BackendChoice {
    pub fn resolve(self, n: usize) -> RankBackend {
        match self {
            BackendChoice::Auto if n <= AUTO_EXACT_MAX_N => RankBackend::Exact,
            BackendChoice::Auto => RankBackend::Pbh,
            BackendChoice::Svd => RankBackend::Svd,
            BackendChoice::Pbh => RankBackend::Pbh,
            BackendChoice::Exact => RankBackend::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    HittingSet,
    MinVector,
    MinDiagonal,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// System matrix `A` (JSON or CSV).
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value = "vector")]
    pub mode: Mode,
    /// Vector-mode solver; ignored in diagonal mode.
    #[arg(long, value_enum, default_value = "det")]
    pub algo: Algo,
    #[arg(long, value_enum, env = BACKEND_ENV, default_value = "auto")]
    pub backend: BackendChoice,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    /// Instance JSON `{"m": .., "sets": [[..], ..]}` with 1-based elements.
    pub instance: PathBuf,
    /// Also build the symmetric extension.
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Instance JSON for `hitting-set`; a matrix whose rows are left
    /// eigenvectors for `min-vector` and `min-diagonal`.
    pub target: PathBuf,
    #[arg(long, value_enum)]
    pub kind: OracleKind,
    /// Lift the enumeration size guards.
    #[arg(long)]
    pub no_guard: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Config JSON; omitted fields take their defaults.
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write one CSV row per trial.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub matrix: PathBuf,
    /// Input `b` (column vector) or `B` (matrix).
    pub input: PathBuf,
    #[arg(long, value_enum, env = BACKEND_ENV, default_value = "auto")]
    pub backend: BackendChoice,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: &Cli) -> CliResult<CommandOutcome> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn input<T>(path: &Path, r: minctrl_core::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_matrix(path: &Path) -> CliResult<MatrixFile> {
    input(path, read_matrix(path))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = input(path, fs::read_to_string(path).map_err(Into::into))?;
    input(path, serde_json::from_str(&text).map_err(Into::into))
}

fn evaluator(m: &MatrixFile, backend: RankBackend) -> CliResult<RankEvaluator> {
    let opts = RankOptions::default();
    Ok(match m {
        MatrixFile::Rational(a) => RankEvaluator::from_rational(a, backend, &opts)?,
        MatrixFile::Real(a) => RankEvaluator::new(a, backend, &opts)?,
    })
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| minctrl_core::Error::from(e).into())
}

/// Writes `payload` as pretty JSON, creating parent directories.
pub fn write_json(path: &Path, payload: &impl Serialize) -> CliResult<()> {
    let out = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(out)?;
    }
    let mut text = serde_json::to_string_pretty(payload).map_err(|e| out(e.into()))?;
    text.push('\n');
    fs::write(path, text).map_err(out)
}

fn finish(status: ExitStatus, payload: Value, out: Option<&Path>) -> CliResult<CommandOutcome> {
    if let Some(path) = out {
        write_json(path, &payload)?;
    }
    Ok(CommandOutcome { status, payload })
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema_version: u32,
    mode: Mode,
    #[serde(flatten)]
    result: &'a SolveResult,
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<CommandOutcome> {
    let m = load_matrix(&args.matrix)?;
    if m.rows() != m.cols() {
        return Err(CliError::Input {
            path: args.matrix.clone(),
            source: minctrl_core::Error::DimensionMismatch(format!(
                "A must be square, got {}x{}",
                m.rows(),
                m.cols()
            )),
        });
    }
    let eval = evaluator(&m, args.backend.resolve(m.rows()))?;
    let result = match (args.mode, args.algo) {
        (Mode::Vector, Algo::Rand) => randomized_greedy_vector_with(&eval, args.seed)?,
        (Mode::Vector, Algo::Det) => deterministic_greedy_vector_with(&eval)?,
        (Mode::Diagonal, _) => greedy_diagonal_with(&eval)?,
    };
    let status = if result.controllable {
        ExitStatus::Success
    } else {
        ExitStatus::Infeasible
    };
    let payload = to_value(&SolveReport {
        schema_version: SCHEMA_VERSION,
        mode: args.mode,
        result: &result,
    })?;
    finish(status, payload, args.out.as_deref())
}

pub fn read_instance(path: &Path) -> CliResult<HittingSetInstance> {
    let inst: HittingSetInstance = load_json(path)?;
    input(path, inst.validate())?;
    Ok(inst)
}

#[derive(Serialize)]
struct IndexMapFile<'a> {
    schema_version: u32,
    #[serde(flatten)]
    map: &'a IndexMap,
}

#[derive(Serialize)]
struct ColumnMapFile<'a> {
    schema_version: u32,
    r: usize,
    final_column: usize,
    pair_columns: &'a [PairColumn],
}

pub fn cmd_reduce(args: &ReduceArgs) -> CliResult<CommandOutcome> {
    let inst = read_instance(&args.instance)?;
    let red = build_reduction(&inst)?;
    let dir = &args.out_dir;
    let mut files = vec!["V.json", "A.json", "index_map.json"];
    write_json(&dir.join("V.json"), &red.v)?;
    write_json(&dir.join("A.json"), &red.a)?;
    write_json(
        &dir.join("index_map.json"),
        &IndexMapFile {
            schema_version: SCHEMA_VERSION,
            map: &red.index_map,
        },
    )?;
    let mut r = None;
    if args.symmetric {
        let sym = build_symmetric_extension(&inst)?;
        write_json(&dir.join("V_hat.json"), &sym.v_hat)?;
        write_json(&dir.join("A_hat.json"), &sym.a_hat)?;
        write_json(
            &dir.join("column_index_map.json"),
            &ColumnMapFile {
                schema_version: SCHEMA_VERSION,
                r: sym.r,
                final_column: sym.final_column,
                pair_columns: &sym.column_index_map,
            },
        )?;
        files.extend(["V_hat.json", "A_hat.json", "column_index_map.json"]);
        r = Some(sym.r);
    }
    let payload = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "n": red.a.rows(),
        "r": r,
        "eigenvalues": red.eigenvalues,
        "out_dir": dir,
        "files": files,
    });
    Ok(CommandOutcome {
        status: ExitStatus::Success,
        payload,
    })
}

#[derive(Serialize)]
struct OracleReport<'a> {
    schema_version: u32,
    kind: OracleKind,
    #[serde(flatten)]
    result: &'a OracleResult,
}

pub fn cmd_oracle(args: &OracleArgs) -> CliResult<CommandOutcome> {
    let limits = if args.no_guard {
        OracleLimits::unlimited()
    } else {
        OracleLimits::default()
    };
    let result = match args.kind {
        OracleKind::HittingSet => {
            let inst = read_instance(&args.target)?;
            brute_force_hitting_set_with(&inst, limits)?
        }
        OracleKind::MinVector | OracleKind::MinDiagonal => {
            let rows = input(&args.target, load_matrix(&args.target)?.to_rational())?;
            if args.kind == OracleKind::MinVector {
                brute_force_min_vector_support_with(&rows, limits)?
            } else {
                brute_force_min_diagonal_support_with(&rows, limits)?
            }
        }
    };
    let payload = to_value(&OracleReport {
        schema_version: SCHEMA_VERSION,
        kind: args.kind,
        result: &result,
    })?;
    finish(ExitStatus::Success, payload, args.out.as_deref())
}

#[derive(Serialize)]
struct ExperimentFile<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a ExperimentReport,
}

pub fn cmd_experiment(args: &ExperimentArgs) -> CliResult<CommandOutcome> {
    let cfg: ExperimentConfig = load_json(&args.config)?;
    input(&args.config, cfg.validate())?;
    let report = run_experiment(&cfg)?;
    if let Some(path) = &args.csv {
        let csv = report.records_csv()?;
        fs::write(path, csv).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        })?;
    }
    let payload = to_value(&ExperimentFile {
        schema_version: SCHEMA_VERSION,
        report: &report,
    })?;
    finish(ExitStatus::Success, payload, args.out.as_deref())
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<CommandOutcome> {
    let a = load_matrix(&args.matrix)?;
    let b = load_matrix(&args.input)?;
    if a.rows() != a.cols() || b.rows() != a.rows() {
        return Err(minctrl_core::Error::DimensionMismatch(format!(
            "A is {}x{} and B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ))
        .into());
    }
    let backend = args.backend.resolve(a.rows());
    let eval = evaluator(&a, backend)?;
    let rank = match &b {
        MatrixFile::Rational(b) => eval.rank_input_exact(b)?,
        MatrixFile::Real(b) => eval.rank_input(b)?,
    };
    let n = eval.n();
    let status = if rank == n {
        ExitStatus::Success
    } else {
        ExitStatus::Infeasible
    };
    let payload = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "backend": backend,
        "n": n,
        "rank": rank,
        "controllable": rank == n,
    });
    finish(status, payload, args.out.as_deref())
}
