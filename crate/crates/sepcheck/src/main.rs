use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use sepcheck::report::{run, OutputFormat, PoolChoice, RunConfig, RunMode};

/// Separability checker for unboxed datatype declarations.
///
/// Reads UTF-8 declaration files in an OCaml-flavoured syntax, infers a
/// per-parameter mode signature for every `type ... and ...` block and
/// reports whether each declaration is safe to unbox.
#[derive(Parser)]
#[command(name = "sepcheck", version, about)]
struct Cli {
    /// Input declaration files.
    inputs: Vec<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Print the derivation rule applied at every node.
    #[arg(long)]
    explain: bool,

    /// Validate accepted signatures against the ground-value semantics.
    #[arg(long)]
    oracle: bool,

    /// Compare against the expansion-based check.
    #[arg(long)]
    diff: bool,

    /// Maximum ground-value depth for the oracle.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    oracle_depth: Option<u64>,

    /// Instantiation pool for the oracle.
    #[arg(long, value_enum, default_value_t = Pool::Default)]
    oracle_pool: Pool,

    /// Expansion budget for the legacy check.
    #[arg(long, value_name = "N")]
    legacy_fuel: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pool {
    Small,
    Default,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match (cli.explain, cli.oracle, cli.diff) {
        (false, false, false) => RunMode::Check,
        (true, false, false) => RunMode::Explain,
        (false, true, false) => RunMode::Oracle,
        (false, false, true) => RunMode::Diff,
        _ => {
            eprintln!("error: --explain, --oracle and --diff are mutually exclusive");
            return ExitCode::from(2);
        }
    };
    let cfg = RunConfig {
        inputs: cli.inputs,
        mode,
        format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
        oracle_depth: cli.oracle_depth.map(|d| d as usize),
        oracle_pool: match cli.oracle_pool {
            Pool::Small => PoolChoice::Small,
            Pool::Default => PoolChoice::Default,
        },
        legacy_fuel: cli.legacy_fuel,
    };
    let code = run(&cfg, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
