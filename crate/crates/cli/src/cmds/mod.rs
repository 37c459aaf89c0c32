use std::fs;
use std::path::Path;

use gsv_interp::imaging::{read_pgm, write_pgm, GrayImage};
use gsv_interp::model::GsvModel;

use crate::failure::Failure;

mod bench;
mod init_model;
mod interpolate;
mod mask;
mod metrics;
mod tune;
mod verify;

pub use bench::bench;
pub use init_model::init_model;
pub use interpolate::{interpolate, InterpolateArgs};
pub use mask::mask;
pub use metrics::metrics;
pub use tune::{tune, TuneArgs};
pub use verify::verify;

fn read_image(path: &Path) -> Result<GrayImage, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    read_pgm(&bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_image(path: &Path, img: &GrayImage) -> Result<(), Failure> {
    fs::write(path, write_pgm(img))
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Missing `--model` means the inert defaults: pure base interpolation.
fn load_model(path: Option<&Path>) -> Result<GsvModel, Failure> {
    match path {
        Some(p) => Ok(GsvModel::load(p)?),
        None => Ok(GsvModel::default()),
    }
}

fn quality_line(psnr: f64, ssim: f64) -> String {
    format!("PSNR | SSIM: {psnr:.2} | {ssim:.4}")
}
