//! Command-line front end. Each verb writes its report to a caller-supplied
//! writer so it can be driven from tests as well as from `main`.

mod commands;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use commands::{analyze, compare_haar, gen, roundtrip, stats, synth, resolve_basis};

/// Exit status of a successful command.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
/// A compare command ran but the checked claim did not hold.
pub const EXIT_CLAIM_FAILED: i32 = 2;
pub const EXIT_NONADMISSIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sqsynth", version, about = "Deconstruct periodic signals onto arbitrary bases and resynthesize them with square waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a test signal as WAV or CSV
    Gen(GenArgs),
    /// Deconstruct the first period of a signal onto a basis
    Analyze(AnalyzeArgs),
    /// Render a decomposition file with one of the synthesis engines
    Synth(SynthArgs),
    /// Analyze, resynthesize and compare against the input
    Roundtrip(RoundtripArgs),
    /// Compare a truncated Haar projection of a sine with its square-wave reconstruction
    CompareHaar(CompareHaarArgs),
    /// Operation counts of every applicable engine for a decomposition
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Sine,
    Square,
    Multiharmonic,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineName {
    Naive,
    Diff,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpName {
    Nearest,
    Linear,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    #[arg(long, default_value_t = 1024)]
    pub period_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    /// Explicit components for multiharmonic, as `k:module:phase,...`
    #[arg(long)]
    pub harmonics: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 7)]
    pub components: usize,
    #[arg(long, default_value_t = 11)]
    pub max_harmonic: usize,
    /// Source signal for `--shape file`
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 44_100)]
    pub rate: u32,
    /// Output path; `.wav` writes PCM, anything else CSV
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    /// `square`, `square-grid`, `sine`, or a CSV/WAV file holding one period
    #[arg(long, default_value = "square")]
    pub basis: String,
    /// Number of terms; defaults to every harmonic of the frame
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Reject bases with a nonpositive admissibility margin
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1024)]
    pub period_samples: usize,
    #[command(flatten)]
    pub basis: BasisArgs,
    #[arg(long, short, default_value = "decomposition.json")]
    pub out: PathBuf,
    /// Write the `k,M,Theta` table here
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[arg(long, default_value_t = 1024)]
    pub period_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub oversample: usize,
    /// One-pole low-pass cutoff in harmonics of the fundamental
    #[arg(long)]
    pub cutoff: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    #[arg(long, default_value_t = 4096)]
    pub lut_size: usize,
    #[arg(long, value_enum, default_value_t = InterpName::Linear)]
    pub interp: InterpName,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = EngineName::Diff)]
    pub engine: EngineName,
    #[command(flatten)]
    pub render: RenderArgs,
    /// Keep one sample per base-grid step after filtering
    #[arg(long)]
    pub decimate: bool,
    #[arg(long, default_value_t = 44_100)]
    pub rate: u32,
    #[arg(long, short, default_value = "synth.wav")]
    pub out: PathBuf,
    /// Also write the stats block here
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub basis: BasisArgs,
    /// Defaults to the differential engine for square bases, Fourier otherwise
    #[arg(long, value_enum)]
    pub engine: Option<EngineName>,
    #[arg(long, default_value_t = 1024)]
    pub period_samples: usize,
    #[arg(long, default_value_t = 4)]
    pub oversample: usize,
    #[arg(long)]
    pub cutoff: Option<f64>,
    #[arg(long, default_value_t = 4096)]
    pub lut_size: usize,
    /// Write the residual trace as `terms,residual` CSV
    #[arg(long)]
    pub trace_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareHaarArgs {
    #[arg(long, default_value = "sine")]
    pub signal: String,
    #[arg(long, default_value_t = 1024)]
    pub period_samples: usize,
    #[arg(long, default_value_t = 32)]
    pub haar_n: usize,
    /// Number of nonzero square-wave oscillators
    #[arg(long, default_value_t = 21)]
    pub square_n: usize,
    #[arg(long, default_value_t = 4)]
    pub oversample: usize,
    #[arg(long, default_value_t = 30.0)]
    pub cutoff: f64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub render: RenderArgs,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NonadmissibleBasis { .. } | Error::NonadmissibleFundamental { .. } => EXIT_NONADMISSIBLE,
        _ => EXIT_USAGE,
    }
}

/// Runs one parsed command and returns its exit status; errors are
/// reported on `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Gen(a) => gen(&a, out),
        Command::Analyze(a) => analyze(&a, out, err),
        Command::Synth(a) => synth(&a, out),
        Command::Roundtrip(a) => roundtrip(&a, out, err),
        Command::CompareHaar(a) => compare_haar(&a, out),
        Command::Stats(a) => stats(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
