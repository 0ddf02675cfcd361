//! Batch command-line front end for the strain pipeline.
//!
//! Every subcommand is deterministic for fixed inputs, so reruns produce
//! byte-identical output files. Exit codes distinguish failure classes:
//! 2 for unreadable or invalid inputs, 3 when nothing was detected, and
//! 4 when two inputs are incompatible with each other.

mod commands;
mod overlay;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use straincam_core::{Error, PipelineConfig};

#[derive(Parser)]
#[command(name = "straincam", version, about = "Camera-based tactile strain measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove fisheye distortion from a frame
    Undistort(commands::undistort::UndistortArgs),
    /// Recover the marker control grid from one frame
    Extract(commands::extract::ExtractArgs),
    /// Measure strain, force, contact, and edge angle from a frame pair
    Strain(commands::strain::StrainArgs),
    /// Generate synthetic frames with ground-truth sidecars
    Synth(commands::synth::SynthArgs),
    /// Fit a strain-to-force line from measured pairs
    Calibrate(commands::calibrate::CalibrateArgs),
}

/// Flags every subcommand accepts.
#[derive(Args)]
struct CommonArgs {
    /// Pipeline configuration file (TOML); embedded defaults apply when omitted
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Print one machine-readable JSON document on stdout
    #[arg(long)]
    json: bool,

    /// Directory output files are written into
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
}

impl CommonArgs {
    fn load_config(&self) -> straincam_core::Result<PipelineConfig> {
        match &self.config {
            Some(path) => PipelineConfig::load(path).map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
                Error::Io(io) => Error::Io(std::io::Error::new(
                    io.kind(),
                    format!("{}: {io}", path.display()),
                )),
                other => other,
            }),
            None => Ok(PipelineConfig::default()),
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoQuadrilaterals | Error::GridDegenerate(_) | Error::NotEnoughPoints { .. } => 3,
        Error::MismatchedGrids(_) | Error::MismatchedSurfaces(_) | Error::DegenerateFit(_) => 4,
        _ => 2,
    }
}

/// Rust ignores SIGPIPE, turning `straincam ... | head` into a panic when
/// stdout closes; dying quietly like other line-oriented tools is better.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Undistort(args) => commands::undistort::run(args),
        Command::Extract(args) => commands::extract::run(args),
        Command::Strain(args) => commands::strain::run(args),
        Command::Synth(args) => commands::synth::run(args),
        Command::Calibrate(args) => commands::calibrate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
