//! `valcone`: classify divisorial valuations of Hirzebruch surfaces from the
//! command line.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "valcone",
    version,
    about = "Sign at infinity and cones of curves for valuations of Hirzebruch surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
struct Format {
    /// Emit JSON (the default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit one `key: value` line per JSON field.
    #[arg(long)]
    text: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Special,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChartArg {
    /// Polynomial in `x, y` on the chart at infinity.
    Infinity,
    /// Polynomial in `u, v` at the point `p`.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Positive,
    Zero,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide special / non-special and the sign at infinity.
    Classify {
        config: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Build a configuration file from maximal contact values.
    FromMcv {
        #[arg(long, allow_negative_numbers = true)]
        delta: i64,
        #[arg(long, value_enum)]
        point_kind: Option<KindArg>,
        /// Comma-separated values, the last one being the inverse volume.
        #[arg(long)]
        mcv: String,
        #[arg(long, default_value_t = 1)]
        f1: i64,
        #[arg(long, default_value_t = 0)]
        m0: i64,
        #[arg(long)]
        m1: Option<i64>,
        /// Write the configuration here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generators of the cone of curves (exit 2 when the criterion fails).
    Cone {
        config: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Generators of the dual cone.
    DualCone {
        config: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Dual graph of the exceptional divisors in DOT.
    DualGraph { config: PathBuf },
    /// Multiplicities, maximal contact values and Noether values.
    Invariants {
        config: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Exact value of a polynomial on an explicit model.
    Value {
        config: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = ChartArg::Infinity)]
        chart: ChartArg,
        #[arg(long, env = "VALCONE_SEED", default_value_t = 0)]
        seed: u64,
        /// Model JSON whose free-point parameters replace the seeded ones.
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        format: Format,
    },
    /// Search for a function refuting the sign at infinity (exit 2 when none is found).
    Witness {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Positive)]
        mode: ModeArg,
        #[arg(long, default_value_t = 6)]
        max_multiple: u32,
        /// Largest bidegree as `a,b`.
        #[arg(long, default_value = "8,8", value_parser = parse_bidegree)]
        max_bidegree: (u32, u32),
        #[arg(long, env = "VALCONE_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: Format,
    },
    /// Run every consistency check on one configuration (exit 2 on a failed check).
    Check {
        config: PathBuf,
        #[arg(long, env = "VALCONE_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: Format,
    },
}

fn parse_bidegree(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    Ok((p(a)?, p(b)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Negative { stdout, stderr }) => {
            if let Some(s) = stdout {
                print!("{s}");
            }
            eprintln!("{stderr}");
            ExitCode::from(2)
        }
    }
}
