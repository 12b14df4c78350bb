//! Front end for `fermiorder`: reproduces the built-in example states, runs
//! seeded property sweeps and ordering scans, and reports negativities.
//!
//! Every report echoes the bipartition and mode ordering behind its numbers.
//! Exit codes: 0 success, 1 property violation, 2 usage or limit error.

// `!(x < tol)` rejects NaN along with large values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod input;
mod render;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermiorder::fock::Sector;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable overriding the agreement tolerance.
pub const TOL_ENV: &str = "FERMIORDER_TOL";
pub const DEFAULT_TOL: f64 = fermiorder::numerics::DEFAULT_TOL;

#[derive(Parser, Debug)]
#[command(name = "fermiorder", version, about = "Fermionic mode orderings, partial traces and entanglement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reproduce the built-in example states and check their expected values.
    Examples,
    /// Compare the fermionic partial trace with the qubit route on random
    /// even and odd states.
    TheoremSweep(SweepArgs),
    /// Group all mode orderings by the reduced state their qubit route gives.
    OrderingScan(ScanArgs),
    /// Negativity, PPT verdict and two-qubit measures under one ordering.
    Negativity(NegativityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    Even,
    Odd,
    Any,
}

impl From<SectorArg> for Sector {
    fn from(s: SectorArg) -> Self {
        match s {
            SectorArg::Even => Sector::Even,
            SectorArg::Odd => Sector::Odd,
            SectorArg::Any => Sector::Any,
        }
    }
}

/// `n,m`: sizes of the kept and traced blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modes {
    pub n: usize,
    pub m: usize,
}

fn parse_modes(s: &str) -> Result<Modes, String> {
    let (n, m) = s.split_once(',').ok_or_else(|| format!("expected `n,m`, got `{s}`"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("invalid block size `{n}`"))?;
    let m: usize = m.trim().parse().map_err(|_| format!("invalid block size `{m}`"))?;
    if n == 0 || m == 0 {
        return Err("both blocks need at least one mode".into());
    }
    Ok(Modes { n, m })
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value = "2,2", value_parser = parse_modes)]
    pub modes: Modes,

    /// Trials per parity sector.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,

    /// Kept-before-traced ordering to use (default: canonical).
    #[arg(long)]
    pub ordering: Option<String>,
}

/// Where the state comes from. Without `--state`, `--state-file` or
/// `--named`, a random state is drawn from `--sector` with `--seed`.
#[derive(Args, Debug)]
pub struct StateArgs {
    /// Operator polynomial on the vacuum, e.g. "0.5: a+ c+; 0.5: b+ d+".
    #[arg(long, conflicts_with_all = ["state_file", "named"])]
    pub state: Option<String>,

    /// JSON state: {"modes": [..], "amplitudes": {"0110": [re, im], ..}}.
    #[arg(long, conflicts_with = "named")]
    pub state_file: Option<PathBuf>,

    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(fermiorder::states::NAMES))]
    pub named: Option<String>,

    /// Mode labels in canonical order, kept block before `|`: "a,b|c,d".
    #[arg(long, conflicts_with_all = ["named", "modes"])]
    pub labels: Option<String>,

    /// Standard system a1..an, c1..cm.
    #[arg(long, value_parser = parse_modes, conflicts_with = "named")]
    pub modes: Option<Modes>,

    /// Kept modes (default: the first block).
    #[arg(long, value_delimiter = ',')]
    pub kept: Option<Vec<String>>,

    #[arg(long, value_enum, default_value_t = SectorArg::Even)]
    pub sector: SectorArg,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub state: StateArgs,
}

#[derive(Args, Debug)]
pub struct NegativityArgs {
    #[command(flatten)]
    pub state: StateArgs,

    /// Mode ordering, comma list or JSON array. Required: the value
    /// depends on it.
    #[arg(long)]
    pub ordering: String,
}

/// Usage and limit errors; all map to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<fermiorder::Error> for UsageError {
    fn from(e: fermiorder::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<serde_json::Error> for UsageError {
    fn from(e: serde_json::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<csv::Error> for UsageError {
    fn from(e: csv::Error) -> Self {
        Self(e.to_string())
    }
}

/// A rendered report and whether it records a property violation.
#[derive(Debug)]
pub struct Report {
    pub body: String,
    pub violation: bool,
    /// Printed to stderr.
    pub notes: Vec<String>,
}

/// Reads the tolerance override, if any.
pub fn tolerance() -> Result<f64, UsageError> {
    match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
            _ => Err(UsageError(format!("{TOL_ENV}: `{v}` is not a positive number"))),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

pub fn run(cli: &Cli) -> Result<Report, UsageError> {
    let tol = tolerance()?;
    match &cli.command {
        Command::Examples => commands::examples(cli.format, tol),
        Command::TheoremSweep(args) => commands::theorem_sweep(args, cli.seed, cli.format, tol),
        Command::OrderingScan(args) => commands::ordering_scan(args, cli.seed, cli.format, tol),
        Command::Negativity(args) => commands::negativity(args, cli.seed, cli.format),
    }
}

/// Runs the command, writes the report and returns the exit code.
pub fn execute(cli: &Cli) -> u8 {
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &report.body),
        None => std::io::stdout().lock().write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    if report.violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}
