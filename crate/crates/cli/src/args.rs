use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fapanc::anc::scenario::{DEFAULT_CHANNEL_ORDER, DEFAULT_LENGTH, DEFAULT_SNR_DB};
use fapanc::anc::NoiseKind;
use fapanc::{Algorithm, SelectionNorm};

#[derive(Debug, Parser)]
#[command(
    name = "fapanc",
    version,
    about = "Adaptive two-microphone noise cancellation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Denoise with one algorithm.
    Run(RunArgs),
    /// Run all four algorithms on the same input and tabulate SNR improvement.
    Compare(CompareArgs),
    /// Write a synthetic scenario's primary, reference and clean WAVs.
    Synth(SynthArgs),
    /// Check the fast recursions against their direct references.
    OracleCheck(OracleArgs),
}

/// Filter parameters. Anything left unset takes the algorithm's default.
#[derive(Debug, Clone, Default, Args)]
pub struct FilterArgs {
    /// Filter order M.
    #[arg(short = 'M', long = "order")]
    pub order: Option<usize>,
    /// Step size (LMS, NLMS, FAP).
    #[arg(long)]
    pub mu: Option<f64>,
    /// RLS forgetting factor, 0 < lambda <= 1.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// RLS initial inverse scale: P(0) = I / delta.
    #[arg(long)]
    pub delta: Option<f64>,
    /// NLMS regularizer.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// FAP window length L (must exceed M).
    #[arg(short = 'L', long = "window")]
    pub window: Option<usize>,
    /// FAP coefficient updates per sample P.
    #[arg(short = 'P', long = "iterations")]
    pub iterations: Option<usize>,
    /// FAP column selection: norm or norm_squared.
    #[arg(long)]
    pub selection_norm: Option<SelectionNorm>,
}

/// Where the microphone signals come from.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Generate a synthetic scenario instead of reading WAV files.
    #[arg(long)]
    pub synth: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Target SNR of the primary input against the clean signal (synthetic input).
    #[arg(long, default_value_t = DEFAULT_SNR_DB, allow_negative_numbers = true)]
    pub snr_db: f64,
    /// white, colored or babble-like.
    #[arg(long, default_value_t = NoiseKind::Colored)]
    pub noise_kind: NoiseKind,
    /// Synthetic scenario length in samples.
    #[arg(long, default_value_t = DEFAULT_LENGTH)]
    pub length: usize,
    /// Taps of the synthetic noise path to the primary microphone.
    #[arg(long, default_value_t = DEFAULT_CHANNEL_ORDER)]
    pub channel_order: usize,
    /// Primary microphone WAV (speech plus noise).
    #[arg(long)]
    pub primary: Option<PathBuf>,
    /// Reference microphone WAV (noise only).
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Clean speech WAV, enabling SNR figures for recorded input.
    #[arg(long)]
    pub clean: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = Algorithm::Fap)]
    pub algo: Algorithm,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub input: InputArgs,
    /// Denoised output WAV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Learning-curve CSV.
    #[arg(long)]
    pub mse_csv: Option<PathBuf>,
    /// JSON summary (always printed to stdout as well).
    #[arg(long)]
    pub summary_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory for compare.csv, per-algorithm curves and denoised WAVs.
    #[arg(long, default_value = "fapanc-compare")]
    pub out: PathBuf,
    /// JSON summary; defaults to summary.json in the output directory.
    #[arg(long)]
    pub summary_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output directory for primary.wav, reference.wav and clean.wav.
    #[arg(long, default_value = "fapanc-synth")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Samples for the inner-product cache comparison.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Cache order for the inner-product comparison.
    #[arg(short = 'M', long = "order", default_value_t = 8)]
    pub order: usize,
    /// Cache window for the inner-product comparison.
    #[arg(short = 'L', long = "window", default_value_t = 25)]
    pub window: usize,
    /// Corrupt the fast path on purpose; the check must then fail.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}
