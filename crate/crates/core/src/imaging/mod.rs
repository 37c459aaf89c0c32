//! Grayscale images, PGM I/O, checkerboard masking, overlapped patching
//! with smooth fusion, and the PSNR/SSIM quality metrics.

mod image;
mod mask;
mod metrics;
mod patches;
mod pgm;

pub use image::GrayImage;
pub use mask::{apply_checkerboard_mask, baseline_interpolate, mask_image, masked_image};
pub use metrics::{mse, psnr, ssim, PSNR_CAP};
pub use patches::{extract_patches, fuse_patches, patch_positions, PatchGrid};
pub use pgm::{read_pgm, write_pgm};
