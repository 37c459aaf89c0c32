use std::path::Path;

use gsv_interp::imaging::{psnr, ssim};

use super::{quality_line, read_image};
use crate::failure::Failure;

/// Prints the image's quality against the reference as one line.
pub fn metrics(image: &Path, reference: &Path) -> Result<(), Failure> {
    let img = read_image(image)?;
    let truth = read_image(reference)?;
    let p = psnr(&img, &truth)?;
    let s = ssim(&img, &truth)?;
    println!("{}", quality_line(p, s));
    Ok(())
}
