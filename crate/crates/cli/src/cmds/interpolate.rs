use std::path::PathBuf;

use gsv_interp::imaging::{psnr, ssim, PatchGrid};
use gsv_interp::pipeline::{interpolate_image, Mode};

use super::{load_model, quality_line, read_image, write_image};
use crate::failure::Failure;

pub struct InterpolateArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    pub model: Option<PathBuf>,
    pub mode: String,
    pub truth: Option<PathBuf>,
    pub threads: usize,
    pub patch_size: usize,
    pub stride: usize,
}

/// Reconstructs a masked image patchwise and prints the run report as
/// JSON. With `--truth` the report gains psnr/ssim fields and a human
/// quality line precedes it.
pub fn interpolate(args: InterpolateArgs) -> Result<(), Failure> {
    let img = read_image(&args.input)?;
    let model = load_model(args.model.as_deref())?;
    let mode: Mode = args
        .mode
        .parse()
        .map_err(|e: gsv_interp::Error| Failure::input(e.to_string()))?;
    let grid = PatchGrid::new(args.patch_size, args.stride)
        .map_err(|e| Failure::input(e.to_string()))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| Failure::runtime(format!("thread pool: {e}")))?;
    let (out, report) = pool.install(|| interpolate_image(&img, &model, mode, &grid))?;
    write_image(&args.output, &out)?;

    let mut doc = serde_json::to_value(&report)
        .map_err(|e| Failure::runtime(format!("report serialization: {e}")))?;
    if let Some(truth_path) = &args.truth {
        let truth = read_image(truth_path)?;
        let p = psnr(&out, &truth)?;
        let s = ssim(&out, &truth)?;
        doc["psnr"] = serde_json::json!(p);
        doc["ssim"] = serde_json::json!(s);
        println!("{}", quality_line(p, s));
    }
    println!("{:#}", doc);
    log::info!(
        "interpolated {} -> {} in {:.1} ms",
        args.input.display(),
        args.output.display(),
        report.elapsed_ms
    );
    Ok(())
}
