//! `bicrit` command-line driver.
//!
//! Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 on
//! usage or input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bicrit",
    version,
    about = "Bicriteria makespan, set packing and reductions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a planted instance or a regular CNF formula.
    Gen(GenArgs),
    /// Run one algorithm once and report its guarantee.
    Solve(SolveArgs),
    /// Run a randomized algorithm over a seed range.
    Bench(BenchArgs),
    /// Run an exhaustive verification suite.
    Verify(VerifyArgs),
    /// Apply a reduction and write the instance plus metadata.
    Reduce(ReduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Makespan,
    Setpacking,
    Santaclaus,
    Cnf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Alg1,
    Alg2,
    Alg3,
    Combined,
    SpSmall,
    SpLarge,
    SpAll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LpModeArg {
    Solve,
    Planted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ThresholdArg {
    /// eps * |S \ T|
    Outside,
    /// eps * |S ∩ T|
    Inside,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when absent. CNF paths ending in `.cnf` get DIMACS.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, short = 'm', default_value_t = 4)]
    machines: usize,
    #[arg(long, short = 'n', default_value_t = 40)]
    jobs: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Planted partition sets.
    #[arg(long, default_value_t = 30)]
    parts: usize,
    /// Decoy sets.
    #[arg(long, default_value_t = 30)]
    extra: usize,
    #[arg(long, default_value_t = 2000)]
    min_size: usize,
    #[arg(long, default_value_t = 2000)]
    max_size: usize,
    #[arg(long, default_value_t = 15)]
    vars: usize,
    #[arg(long, short = 'q', default_value_t = 3)]
    clause_len: usize,
    #[arg(long, short = 'd', default_value_t = 5)]
    occurrences: usize,
}

#[derive(Args, Debug, Clone)]
struct AlgoFlags {
    #[arg(long, default_value_t = bicrit::makespan::DEFAULT_COLUMN_CAP)]
    column_cap: usize,
    /// Set packing accuracy, a rational in (0, 1).
    #[arg(long, default_value = "1/2")]
    delta: String,
    #[arg(long, value_enum, default_value_t = LpModeArg::Solve)]
    lp_mode: LpModeArg,
    #[arg(long, value_enum, default_value_t = ThresholdArg::Outside)]
    threshold: ThresholdArg,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Instance file.
    instance: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Expected instance kind; checked against the file.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Solution path; the solution goes to stdout with the report when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    flags: AlgoFlags,
}

#[derive(Args, Debug)]
struct BenchArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long, default_value_t = 500)]
    trials: u64,
    /// First seed of the range.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    flags: AlgoFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    /// Seconds-scale smoke run.
    Small,
    /// The complete families.
    Full,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = ["lemma22", "prop25", "lemma42", "gadget", "soundness", "oracle-eq"])]
    suite: String,
    #[arg(long, value_enum, default_value_t = ScaleArg::Full)]
    scale: ScaleArg,
    #[arg(long)]
    max_jobs: Option<usize>,
    #[arg(long)]
    universe: Option<usize>,
    #[arg(long)]
    max_sets: Option<usize>,
    /// Gadget alphabet size; use with `--d`.
    #[arg(long)]
    sigma: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    formulas: Option<usize>,
    /// Formula for the soundness suite (DIMACS or JSON).
    #[arg(long)]
    formula: Option<PathBuf>,
    /// Single eps for the soundness suite.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Reduction {
    /// CNF formula to set packing.
    #[value(name = "cnf-sp", alias = "cnf→sp")]
    CnfSp,
    /// Set packing to Santa Claus.
    #[value(name = "sp-sc", alias = "sp→sc")]
    SpSc,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    from: Reduction,
    #[arg(long = "in")]
    input: PathBuf,
    /// Instance path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: PathBuf,
    /// Santa Claus target.
    #[arg(long = "T", default_value = "1")]
    target: String,
    #[arg(long, default_value_t = 2)]
    alphabet_size: usize,
    /// Gadget degree; defaults to the largest occurrence count (at least 2).
    #[arg(long)]
    degree: Option<usize>,
    /// Satisfying assignment recorded as the planted witness, as 0/1 values
    /// separated by spaces or commas.
    #[arg(long)]
    assignment: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Solve(a) => commands::solve(a),
        Command::Bench(a) => commands::bench(a),
        Command::Verify(a) => commands::verify(a),
        Command::Reduce(a) => commands::reduce(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
