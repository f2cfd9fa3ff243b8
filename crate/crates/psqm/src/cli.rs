//! Argument parsing and exit-status mapping.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, CliError};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Every check passed (or was skipped with a reason).
    Pass = 0,
    /// At least one check failed.
    Fail = 1,
    /// Bad arguments, unreadable input or parameters outside the guards.
    ConfigError = 2,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "psqm",
    version,
    about = "Exact simulation and verification of private simultaneous quantum message protocols"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute a protocol on given or enumerated inputs and print transcripts.
    Run(RunArgs),
    /// Check correctness, privacy, the purity inequalities and the cost.
    Verify(VerifyArgs),
    /// Lower-bound quantities and clique sizes of a function table.
    Bound(BoundArgs),
    /// Bound statistics over random Boolean functions.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolKind {
    Sum2,
    Geq,
    Dj,
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolKind,
    /// Number of parties (sum2, geq).
    #[arg(long)]
    pub k: Option<usize>,
    /// Input half-length; each input has 2l bits (geq).
    #[arg(long)]
    pub l: Option<usize>,
    /// Input length, a power of two (dj).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    /// Comma-separated party inputs, e.g. `00,01`; all inputs when omitted.
    #[arg(long)]
    pub inputs: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Largest input domain enumerated when --inputs is omitted.
    #[arg(long, default_value_t = 1 << 16)]
    pub budget: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for the stratified input sample; required when it is needed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest input domain swept exhaustively.
    #[arg(long, default_value_t = 1 << 16)]
    pub budget: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    /// Function table JSON file.
    #[arg(long)]
    pub table: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Bits per side.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sweep every table instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Run(a) => &a.output,
            Command::Verify(a) => &a.output,
            Command::Bound(a) => &a.output,
            Command::Stats(a) => &a.output,
        }
    }

    pub fn execute(&self) -> Result<Report, CliError> {
        match self {
            Command::Run(a) => commands::run(a),
            Command::Verify(a) => commands::verify(a),
            Command::Bound(a) => commands::bound(a),
            Command::Stats(a) => commands::stats(a),
        }
    }
}

/// Parses `args` (including the program name), executes the command and
/// writes the report to `--out` or `stdout`. Diagnostics go to `stderr`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational =
                matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { ExitStatus::Pass } else { ExitStatus::ConfigError };
        }
    };
    let started = Instant::now();
    let mut report = match cli.command.execute() {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return ExitStatus::ConfigError;
        }
    };
    let output = cli.command.output();
    if output.timing {
        report.elapsed_ms = Some(started.elapsed().as_millis() as u64);
    }
    let text = report.to_canonical_json();
    let written = match &output.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return ExitStatus::ConfigError;
    }
    if report.all_pass() {
        ExitStatus::Pass
    } else {
        for check in report.checks.iter().filter(|c| c.pass == Some(false)) {
            let _ = writeln!(stderr, "check failed: {}", check.name);
        }
        ExitStatus::Fail
    }
}
