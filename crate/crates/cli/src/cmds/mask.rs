use std::path::{Path, PathBuf};

use gsv_interp::graphmodel::checkerboard_partition;
use gsv_interp::imaging::{mask_image, masked_image};

use super::{read_image, write_image};
use crate::failure::Failure;

/// Zeroes the odd-parity half of the input and writes it, plus a sidecar
/// image showing the kept pixels in white.
pub fn mask(input: &Path, output: &Path) -> Result<(), Failure> {
    let img = read_image(input)?;
    let part = checkerboard_partition(img.width(), img.height())?;
    write_image(output, &masked_image(&img, &part)?)?;
    let sidecar = sidecar_path(output);
    write_image(&sidecar, &mask_image(&part)?)?;
    log::info!(
        "masked {} -> {} (mask {})",
        input.display(),
        output.display(),
        sidecar.display()
    );
    Ok(())
}

fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("mask.pgm")
}
