//! `gsv-interp`: checkerboard masking, graph-based interpolation, model
//! tuning, self verification, quality metrics, and solver timing behind
//! one binary. Data goes to stdout, diagnostics to stderr; exit code 2
//! flags bad input, 1 a runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cmds;
mod failure;

use failure::Failure;

#[derive(Parser)]
#[command(name = "gsv-interp", version, about = "Graph-based interpolation of checkerboard-sampled images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every patch-processing command.
#[derive(Args, Debug)]
struct GridOpts {
    /// Square patch side in pixels
    #[arg(long, default_value_t = 64)]
    patch_size: usize,

    /// Offset between neighboring patch origins
    #[arg(long, default_value_t = 48)]
    stride: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Zero out the checkerboard half of an image, with a sidecar mask
    Mask {
        /// Input PGM image
        input: PathBuf,
        /// Masked PGM output; the mask itself lands next to it
        output: PathBuf,
    },

    /// Reconstruct the missing pixels of a masked image
    Interpolate {
        /// Masked PGM image
        input: PathBuf,
        /// Reconstructed PGM output
        output: PathBuf,
        /// Model file; omit to run with the inert defaults
        #[arg(long)]
        model: Option<PathBuf>,
        /// baseline, perturbed, or dr
        #[arg(long, default_value = "dr")]
        mode: String,
        /// Ground truth PGM; prints a PSNR | SSIM line when given
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Worker threads (1 keeps reports deterministic)
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        grid: GridOpts,
    },

    /// Fit the model gains on directories of training and validation images
    Tune {
        /// Directory of ground-truth training PGMs
        train_dir: PathBuf,
        /// Directory of ground-truth validation PGMs
        val_dir: PathBuf,
        /// Tuned model JSON output
        model_out: PathBuf,
        /// Starting model; omit to start from the inert defaults
        #[arg(long)]
        model_in: Option<PathBuf>,
        /// Loss history CSV; defaults to the model path with .history.csv
        #[arg(long)]
        history: Option<PathBuf>,
        /// Patches are cut to this side length
        #[arg(long, default_value_t = 64)]
        patch_size: usize,
        /// Descent step
        #[arg(long, default_value_t = 1e-3)]
        learning_rate: f64,
        /// Patches per gradient step
        #[arg(long, default_value_t = 8)]
        batch_size: usize,
        /// Epochs without validation improvement before stopping
        #[arg(long, default_value_t = 5)]
        patience: usize,
        /// Hard cap on epochs
        #[arg(long, default_value_t = 50)]
        max_epochs: usize,
        /// Batch shuffling seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Run the built-in solver self checks and print a pass/fail table
    Verify,

    /// PSNR and SSIM of an image against a reference
    Metrics {
        /// Image under test (PGM)
        image: PathBuf,
        /// Ground truth reference (PGM)
        reference: PathBuf,
    },

    /// Time the inner solvers across patch sizes and emit CSV
    Bench {
        /// Patch side lengths, e.g. 16 32 64
        #[arg(required = true)]
        sizes: Vec<usize>,
        /// Synthetic patch seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Write a fresh model file with the inert defaults
    InitModel {
        /// Model JSON output path
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let level = std::env::var("GSV_INTERP_LOG").unwrap_or_else(|_| "error".into());
    env_logger::Builder::new().parse_filters(&level).init();

    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Mask { input, output } => cmds::mask(&input, &output),
        Command::Interpolate {
            input,
            output,
            model,
            mode,
            truth,
            threads,
            grid,
        } => cmds::interpolate(cmds::InterpolateArgs {
            input,
            output,
            model,
            mode,
            truth,
            threads,
            patch_size: grid.patch_size,
            stride: grid.stride,
        }),
        Command::Tune {
            train_dir,
            val_dir,
            model_out,
            model_in,
            history,
            patch_size,
            learning_rate,
            batch_size,
            patience,
            max_epochs,
            seed,
        } => cmds::tune(cmds::TuneArgs {
            train_dir,
            val_dir,
            model_out,
            model_in,
            history,
            patch_size,
            learning_rate,
            batch_size,
            patience,
            max_epochs,
            seed,
        }),
        Command::Verify => cmds::verify(),
        Command::Metrics { image, reference } => cmds::metrics(&image, &reference),
        Command::Bench { sizes, seed } => cmds::bench(&sizes, seed),
        Command::InitModel { output } => cmds::init_model(&output),
    }
}
