//! JSON-in / JSON-out command line for oblique dual frames.
//!
//! Every run reads one problem file (or a directory of them with
//! `--batch`), executes a single subcommand, and prints a deterministic
//! report envelope: floats at full precision, keys sorted, residuals on
//! every asserted identity. Failures print a structured error record and
//! exit 1 (bad input) or 2 (the mathematics refused).

mod problem;
mod report;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oblique_frames::{FrameError, Tol};
use serde_json::{json, Value};

use problem::CliError;
use report::{envelope, error_record, to_json};
use run::{DualMode, RotateObjective, RunCtx};

#[derive(Parser)]
#[command(
    name = "oframe",
    version,
    about = "Oblique dual frames: principal angles, certified duals, optimal rotations, aliasing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON). Required unless --batch is given.
    problem: Option<PathBuf>,

    /// Run every *.json file in DIR instead, one NDJSON line per file.
    #[arg(long, value_name = "DIR")]
    batch: Option<PathBuf>,

    /// Equality tolerance for residual checks.
    #[arg(long, value_name = "EPS")]
    tol_eq: Option<f64>,

    /// Relative rank cutoff for spectral decompositions.
    #[arg(long, value_name = "EPS")]
    tol_rank: Option<f64>,

    /// Overrides the problem file's seed.
    #[arg(long)]
    seed: Option<u64>,

    /// In the unproven short-frame regime, sample competing rotations
    /// instead of failing.
    #[arg(long)]
    experiment_conjecture: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Principal angles, Friedrichs and Dixmier angles, subspace aliasing.
    Angles(AnglesArgs),
    /// Construct a dual frame and certify it.
    Dual(DualArgs),
    /// Test a candidate spectrum against the dual characterization.
    Feasible(FeasibleArgs),
    /// Optimal rigid rotations of the analysis frame.
    Rotate(RotateArgs),
    /// Evaluate a convex potential on the frame and its canonical dual.
    Potential(PotentialArgs),
}

#[derive(Args)]
struct AnglesArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    common: Common,

    /// Construction to use.
    #[arg(long, value_enum)]
    mode: DualMode,

    /// Rank budget for --mode random (default: n - d).
    #[arg(long)]
    rank_budget: Option<usize>,

    /// Added trace for --mode random (default: 1).
    #[arg(long)]
    energy: Option<f64>,
}

#[derive(Args)]
struct FeasibleArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RotateArgs {
    #[command(flatten)]
    common: Common,

    /// What the rotation minimizes.
    #[arg(long, value_enum)]
    objective: RotateObjective,
}

#[derive(Args)]
struct PotentialArgs {
    #[command(flatten)]
    common: Common,

    /// Potential to evaluate: `fp`, `mse`, or `pq:<q>`.
    #[arg(long = "h", value_name = "SPEC")]
    h: String,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Angles(a) => &a.common,
            Command::Dual(a) => &a.common,
            Command::Feasible(a) => &a.common,
            Command::Rotate(a) => &a.common,
            Command::Potential(a) => &a.common,
        }
    }

    /// The echo placed in the report: subcommand plus the flags that
    /// change the mathematics. The input file is identified by digest,
    /// not path, so reports stay byte-identical across directories.
    fn echo(&self) -> String {
        fn name<T: ValueEnum>(v: &T) -> String {
            v.to_possible_value().expect("no skipped variants").get_name().to_string()
        }
        match self {
            Command::Angles(_) => "angles".into(),
            Command::Dual(a) => format!("dual --mode {}", name(&a.mode)),
            Command::Feasible(_) => "feasible".into(),
            Command::Rotate(a) => format!("rotate --objective {}", name(&a.objective)),
            Command::Potential(a) => format!("potential --h {}", a.h),
        }
    }
}

fn error_kind(err: &CliError) -> &'static str {
    match err {
        CliError::Parse(_) => "parse",
        CliError::Validation(_) => "validation",
        CliError::Math(e) => match e {
            FrameError::NotHermitian { .. } => "not-hermitian",
            FrameError::NoConvergence { .. } => "no-convergence",
            FrameError::NotComplementary { .. } => "not-complementary",
            FrameError::NotOrthonormal { .. } => "not-orthonormal",
            FrameError::SpanMismatch { .. } => "span-mismatch",
            FrameError::NotADual { .. } => "not-a-dual",
            FrameError::NotFeasible => "not-feasible",
            FrameError::BadTrace { .. } => "bad-trace",
            FrameError::BadM { .. } => "bad-m",
            FrameError::RankBudgetExceeded { .. } => "rank-budget-exceeded",
            FrameError::NonPositiveEigenvalue { .. } => "non-positive-eigenvalue",
            FrameError::BadPotential => "bad-potential",
            FrameError::ConjectureRegime { .. } => "conjecture-regime",
            FrameError::RankDeficient { .. } => "rank-deficient",
            FrameError::InvalidSpectrum(_) => "invalid-spectrum",
            FrameError::InvalidArgument(_) => "invalid-argument",
            FrameError::CrossCheck { .. } => "cross-check",
        },
    }
}

fn exit_for(err: &CliError) -> u8 {
    match err {
        CliError::Parse(_) | CliError::Validation(_) => 1,
        CliError::Math(_) => 2,
    }
}

fn dispatch(cmd: &Command, ctx: &RunCtx) -> Result<(Value, Vec<String>), CliError> {
    match cmd {
        Command::Angles(_) => run::cmd_angles(ctx),
        Command::Dual(a) => run::cmd_dual(ctx, a.mode, a.rank_budget, a.energy),
        Command::Feasible(_) => run::cmd_feasible(ctx),
        Command::Rotate(a) => run::cmd_rotate(ctx, a.objective),
        Command::Potential(a) => run::cmd_potential(ctx, &a.h),
    }
}

fn build_tol(c: &Common) -> Result<Tol, CliError> {
    let mut tol = Tol::default();
    if let Some(e) = c.tol_eq {
        tol.tau_eq = e;
    }
    if let Some(r) = c.tol_rank {
        tol.tau_rank = r;
    }
    tol.validate().map_err(CliError::Math)?;
    Ok(tol)
}

/// Run one problem file through the chosen command, producing the full
/// report envelope.
fn execute(path: &Path, cmd: &Command, tol: &Tol) -> Result<Value, CliError> {
    let c = cmd.common();
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let res = problem::resolve(&bytes, tol)?;
    let ctx = RunCtx {
        res: &res,
        tol,
        seed: c.seed,
        experiment: c.experiment_conjecture,
    };
    let (results, extra) = dispatch(cmd, &ctx)?;
    let mut warnings = res.warnings.clone();
    warnings.extend(extra);
    Ok(envelope(
        &cmd.echo(),
        &res.digest,
        tol,
        c.seed.or(res.seed),
        &warnings,
        results,
    ))
}

fn run_single(path: &Path, cmd: &Command, tol: &Tol) -> u8 {
    match execute(path, cmd, tol) {
        Ok(env) => {
            println!("{}", to_json(&env));
            0
        }
        Err(e) => {
            println!("{}", to_json(&error_record(error_kind(&e), &e.to_string())));
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run_batch(dir: &Path, cmd: &Command, tol: &Tol) -> u8 {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect(),
        Err(e) => {
            let msg = format!("cannot read batch directory {}: {e}", dir.display());
            println!("{}", to_json(&error_record("parse", &msg)));
            eprintln!("error: {msg}");
            return 1;
        }
    };
    files.sort();

    let mut worst = 0u8;
    for path in &files {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let line = match execute(path, cmd, tol) {
            Ok(env) => json!({ "file": name, "report": env }),
            Err(e) => {
                eprintln!("error in {name}: {e}");
                worst = worst.max(exit_for(&e));
                json!({ "file": name, "error": error_record(error_kind(&e), &e.to_string())["error"] })
            }
        };
        println!("{}", to_json(&line));
    }
    if files.is_empty() {
        let msg = format!("no .json files in {}", dir.display());
        println!("{}", to_json(&error_record("validation", &msg)));
        eprintln!("error: {msg}");
        return 1;
    }
    worst
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.command.common();

    let tol = match build_tol(c) {
        Ok(t) => t,
        Err(e) => {
            println!("{}", to_json(&error_record(error_kind(&e), &e.to_string())));
            eprintln!("error: {e}");
            return ExitCode::from(exit_for(&e));
        }
    };

    let code = match (&c.problem, &c.batch) {
        (Some(path), None) => run_single(path, &cli.command, &tol),
        (None, Some(dir)) => run_batch(dir, &cli.command, &tol),
        _ => {
            let msg = "give exactly one of a problem file or --batch DIR";
            println!("{}", to_json(&error_record("validation", msg)));
            eprintln!("error: {msg}");
            1
        }
    };
    ExitCode::from(code)
}
