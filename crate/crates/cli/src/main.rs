//! `varlp`: modulars, norms and norm-axiom verification suites for the mixed
//! space `ℓ^{q(·)}(L^{p(·)})`.
//!
//! Exit codes: 0 all pass, 1 property violated or finding, 2 input error,
//! 3 solver non-convergence.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable overriding the default relative tolerance.
pub const TOLERANCE_ENV: &str = "VARLP_REL_TOL";

#[derive(Debug, Parser)]
#[command(name = "varlp", version, about = "Variable-exponent mixed-norm calculator and verifier")]
struct Cli {
    /// Relative root-finding tolerance (default 1e-12, or $VARLP_REL_TOL).
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Bisection iteration cap.
    #[arg(long, global = true, default_value_t = 200)]
    max_iters: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mixed modular of an instance, or the L^p(·) modular of one component.
    Modular(ValueArgs),
    /// Mixed norm of an instance, or the Luxemburg norm of one component.
    Norm(ValueArgs),
    /// Component weight λ* of one component.
    ComponentWeight {
        #[arg(long)]
        instance: PathBuf,
        /// 0-based component index.
        #[arg(long)]
        component: usize,
    },
    /// Run a verification suite and write a CSV report.
    Verify(VerifyArgs),
    /// Run a crossing probe and write a CSV report.
    Probe(ProbeArgs),
    /// Write a random instance file.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        description: Option<String>,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ValueArgs {
    #[arg(long)]
    instance: PathBuf,
    /// 0-based component index; selects the single-component quantity.
    #[arg(long)]
    component: Option<usize>,
}

#[derive(Debug, Clone, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    dimension: usize,
    #[arg(long, default_value_t = 16)]
    cells: usize,
    #[arg(long, default_value_t = 4)]
    components: usize,
    /// Exponent range `lo:hi`, or a single value.
    #[arg(long, default_value = "1.5:4")]
    p: String,
    #[arg(long, default_value = "1.5:4")]
    q: String,
    /// Bound on |f| values.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Permit exponents in (0, 1].
    #[arg(long)]
    allow_quasi: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Triangle,
    Convexity,
    Oracle,
    QuasiScan,
    Homogeneity,
    UnitBall,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Extra proportional pairs for `convexity`.
    #[arg(long, default_value_t = 0)]
    proportional: usize,
    /// Constant exponents for `oracle`; every (p, q) pair is run `trials` times.
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3,7")]
    exponents: Vec<f64>,
    /// Check one pair of instance files instead (triangle, convexity, quasi-scan).
    #[arg(long, num_args = 2, value_names = ["F", "G"])]
    pair: Option<Vec<PathBuf>>,
    /// Report path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    Lemma,
    Iterate,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(value_enum)]
    kind: ProbeKind,
    /// Instance holding f (and p, q). Without it a seeded random suite runs.
    #[arg(long, requires_all = ["other", "nu", "mu1", "mu2"])]
    instance: Option<PathBuf>,
    /// Instance holding g.
    #[arg(long)]
    other: Option<PathBuf>,
    /// 0-based component index ν.
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long)]
    mu1: Option<f64>,
    #[arg(long)]
    mu2: Option<f64>,
    /// Weights ζ; defaults to the witness decomposition of f/(2‖f‖) + g/(2‖g‖).
    #[arg(long, value_delimiter = ',')]
    zeta: Option<Vec<f64>>,
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(commands::run(cli))
}
