//! `glsnormal`: validate GLS specs, generate digits of normal numbers, and
//! analyze digit files, discrepancies and rational expansions.
//!
//! Exit codes: 0 success, 1 validation or domain failure, 2 usage error,
//! 3 resource cap reached.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "glsnormal",
    version,
    about = "Normal numbers for Generalized Lüroth Series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DigitFormatArg {
    Text,
    Varint,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check that a spec partitions [0, 1] into affine branches.
    Validate {
        /// b-adic:B, lueroth-classic, lueroth-alternating or custom:PATH
        #[arg(long)]
        spec: String,
    },
    /// Build a cutoff schedule and write digits of the normal number z.
    Generate {
        #[arg(long)]
        spec: String,
        /// vdc:B, farey, kronecker:sqrtM|golden or list:PATH, with optional @k shift
        #[arg(long)]
        seq: String,
        /// Number of digits to write.
        #[arg(long)]
        count: u64,
        /// Minimum number of schedule levels; more are added when `count`
        /// needs them.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        levels: u64,
        /// Each cutoff c is checked for every n in [c, ceil(h c)].
        #[arg(long, default_value = "4")]
        horizon: String,
        /// Largest window end per level, counted in columns past the previous cutoff.
        #[arg(long, default_value_t = glsnormal::constructor::DEFAULT_N_CAP)]
        n_cap: u64,
        /// Use (and re-verify) this schedule instead of searching.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: DigitFormatArg,
        #[arg(long, short)]
        output: PathBuf,
        /// Where to write the schedule; defaults to OUTPUT.schedule.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
    /// Block frequencies of a digit file against the spec's product measure.
    Analyze {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        digits: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: DigitFormatArg,
        /// Longest block length reported.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_r: u64,
        /// Restrict blocks to the K most probable digits (required for
        /// infinite digit sets).
        #[arg(long)]
        digit_cap: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        report: ReportFormat,
        /// Decimal places of the decimal column.
        #[arg(long, default_value_t = 6)]
        decimals: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Extreme discrepancy of sequence prefixes as CSV `n,D_n`.
    Discrepancy {
        #[arg(long)]
        seq: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        stride: u64,
        /// Render D_n as a decimal with this many places instead of p/q.
        #[arg(long)]
        decimals: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Classify every a/p^k, k <= kmax, as finite or eventually periodic.
    Survey {
        #[arg(long, default_value = "lueroth-classic")]
        spec: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        base: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        kmax: u32,
        /// List every numerator, including fractions already seen at a smaller k.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = glsnormal::rational::DEFAULT_SURVEY_CAP)]
        cap: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Write the JSON summary here instead of stderr.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("glsnormal: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
