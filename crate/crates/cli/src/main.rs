mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use output::{Emitter, Format};

/// Provers, atomic-base derivability and support evaluation for IMLL and IPL.
///
/// Exit codes: 0 affirmative, 1 negative, 2 indeterminate (budget), 3 usage
/// or parse error. `BESIML_BUDGET` overrides the default search budgets.
#[derive(Parser, Debug)]
#[command(name = "besiml", version)]
struct Cli {
    /// Output format: human-readable text or one JSON object per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a sequent and print a natural-deduction proof if there is one.
    Prove(ProveArgs),
    /// Verify a serialized proof, or a derivation against a base file.
    Check(CheckArgs),
    /// Query derivability `U |- q` in a base file.
    Derive(DeriveArgs),
    /// Show the flattening of a sequent and its bespoke base.
    Flatten(FlattenArgs),
    /// Evaluate the validity judgement of a sequent over enumerated extensions.
    Support(SupportArgs),
    /// Compare provability with bespoke-base derivability over a sequent family.
    Crosscheck(CrosscheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogicArg {
    Imll,
    Ipl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Standard,
    Generalized,
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    #[arg(long, value_enum, default_value_t = LogicArg::Imll)]
    logic: LogicArg,
    /// Sequent text such as `p, p -o q |- q`.
    sequent: Option<String>,
    /// File of sequents, one per line.
    #[arg(long, conflicts_with = "sequent")]
    file: Option<PathBuf>,
    /// Write the proof as JSON to this path.
    #[arg(long)]
    emit_proof: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = LogicArg::Imll)]
    logic: LogicArg,
    /// Proof document as written by `prove --emit-proof`.
    #[arg(long)]
    proof: Option<PathBuf>,
    /// Also require the proof to end in this sequent.
    #[arg(long, requires = "proof")]
    sequent: Option<String>,
    /// Derivation document as written by `derive --emit`.
    #[arg(long, requires = "base", conflicts_with = "proof")]
    derivation: Option<PathBuf>,
    /// Base file the derivation lives in.
    #[arg(long)]
    base: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    /// Selects the discipline: multiset for imll, set for ipl.
    #[arg(long, value_enum, default_value_t = LogicArg::Imll)]
    logic: LogicArg,
    #[arg(long)]
    base: PathBuf,
    /// Atomic query such as `p, q |- r`.
    query: String,
    /// Resource cap on explored statements.
    #[arg(long)]
    max_resources: Option<usize>,
    /// Write the derivation as JSON to this path.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FlattenArgs {
    #[arg(long, value_enum, default_value_t = LogicArg::Imll)]
    logic: LogicArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    mode: ModeArg,
    sequent: String,
    /// List the rules of the base with their origins.
    #[arg(long)]
    emit_base: bool,
    /// Write the base to this path in the base file format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SupportArgs {
    #[arg(long, value_enum, default_value_t = LogicArg::Imll)]
    logic: LogicArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    mode: ModeArg,
    sequent: String,
    /// Seed base (defaults to the empty base).
    #[arg(long)]
    base: Option<PathBuf>,
    /// Resource atoms of the judgement, comma separated (IMLL).
    #[arg(long)]
    resources: Option<String>,
    /// Atoms of enumerated rules, comma separated (defaults to the sequent's
    /// atoms plus one fresh atom).
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    max_rules: Option<usize>,
    #[arg(long)]
    max_premises: Option<usize>,
    #[arg(long)]
    max_assumptions: Option<usize>,
    #[arg(long)]
    max_resources: Option<usize>,
    /// Work budget for the evaluation.
    #[arg(long)]
    work: Option<u64>,
    /// Directory for the witness, its bases and a replay script.
    #[arg(long)]
    emit_witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrosscheckArgs {
    #[arg(long, value_enum, default_value_t = LogicArg::Imll)]
    logic: LogicArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    atoms: usize,
    #[arg(long, default_value_t = 2)]
    max_connectives: usize,
    #[arg(long, default_value_t = 2)]
    max_context: usize,
    /// Check a random sample of this many sequents from the family.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

const USAGE: u8 = 3;

fn run(cli: Cli) -> Result<i32, CliError> {
    let budgets = commands::Budgets::from_env()?;
    let name = match &cli.command {
        Command::Prove(_) => "prove",
        Command::Check(_) => "check",
        Command::Derive(_) => "derive",
        Command::Flatten(_) => "flatten",
        Command::Support(_) => "support",
        Command::Crosscheck(_) => "crosscheck",
    };
    let out = Emitter::new(cli.format, name);
    match &cli.command {
        Command::Prove(a) => commands::prove(a, &out, budgets),
        Command::Check(a) => commands::check(a, &out),
        Command::Derive(a) => commands::derive(a, &out, budgets),
        Command::Flatten(a) => commands::flatten(a, &out),
        Command::Support(a) => commands::support(a, &out, budgets),
        Command::Crosscheck(a) => commands::crosscheck(a, &out, budgets),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let json = cli.format == Format::Json;
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "schema": output::SCHEMA_VERSION, "error": e.to_string() })
                );
            }
            eprintln!("besiml: {e}");
            ExitCode::from(USAGE)
        }
    }
}
