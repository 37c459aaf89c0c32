use std::fs;
use std::path::{Path, PathBuf};

use gsv_interp::imaging::{extract_patches, GrayImage, PatchGrid};
use gsv_interp::tuner::{self, Handle, PatchDataset, TrainConfig};

use super::{load_model, read_image};
use crate::failure::Failure;

pub struct TuneArgs {
    pub train_dir: PathBuf,
    pub val_dir: PathBuf,
    pub model_out: PathBuf,
    pub model_in: Option<PathBuf>,
    pub history: Option<PathBuf>,
    pub patch_size: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub patience: usize,
    pub max_epochs: usize,
    pub seed: u64,
}

/// Cuts both directories into patches, descends on the model parameters,
/// and writes the tuned model plus its loss history. The summary lands on
/// stdout as JSON.
pub fn tune(args: TuneArgs) -> Result<(), Failure> {
    let train = load_patch_dir(&args.train_dir, args.patch_size)?;
    let val = load_patch_dir(&args.val_dir, args.patch_size)?;
    let dataset = PatchDataset::new(train, val)?;
    let start = load_model(args.model_in.as_deref())?;
    let config = TrainConfig {
        learning_rate: args.learning_rate,
        batch_size: args.batch_size,
        patience: args.patience,
        max_epochs: args.max_epochs,
        seed: args.seed,
        ..TrainConfig::default()
    };

    let (tuned, history) = tuner::tune(&start, &dataset, &Handle::default_set(), &config)
        .map_err(|e| Failure::runtime(e.to_string()))?;

    tuned.save(&args.model_out)?;
    let history_path = args
        .history
        .unwrap_or_else(|| args.model_out.with_extension("history.csv"));
    fs::write(&history_path, history.to_csv())?;

    let best_val = history
        .rows
        .iter()
        .map(|r| r.val_mse)
        .fold(f64::INFINITY, f64::min);
    let summary = serde_json::json!({
        "epochs_run": history.rows.len() - 1,
        "start_val_mse": history.rows[0].val_mse,
        "best_val_mse": best_val,
        "model": args.model_out.display().to_string(),
        "history": history_path.display().to_string(),
    });
    println!("{summary:#}");
    Ok(())
}

/// Every PGM in the directory, tiled into non-overlapping patches. The
/// requested side shrinks to fit small images (kept even so the
/// checkerboard halves stay equal).
fn load_patch_dir(dir: &Path, patch_size: usize) -> Result<Vec<GrayImage>, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .map(|ext| ext.eq_ignore_ascii_case("pgm"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::input(format!(
            "{}: no .pgm files found",
            dir.display()
        )));
    }

    let mut patches = Vec::new();
    for file in &files {
        let img = read_image(file)?;
        let mut side = patch_size.min(img.width()).min(img.height());
        if side % 2 == 1 {
            side -= 1;
        }
        if side < 2 {
            return Err(Failure::input(format!(
                "{}: image {}x{} is too small to cut patches from",
                file.display(),
                img.width(),
                img.height()
            )));
        }
        let grid = PatchGrid::new(side, side).map_err(|e| Failure::input(e.to_string()))?;
        for (patch, _) in extract_patches(&img, &grid)? {
            patches.push(patch);
        }
    }
    Ok(patches)
}
