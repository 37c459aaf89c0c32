use crate::error::{Error, Result};
use crate::imaging::GrayImage;

/// Reported PSNR for a perfect reconstruction (the true value is infinite).
pub const PSNR_CAP: f64 = 99.0;

/// Mean squared error between two images of equal size.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::dims(
            "mse image sizes",
            a.width() * a.height(),
            b.width() * b.height(),
        ));
    }
    let n = a.pixels().len() as f64;
    Ok(a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n)
}

/// Peak signal-to-noise ratio in dB on [0, 1] images: 10·log10(1 / MSE),
/// capped at [`PSNR_CAP`]. Identical to the 8-bit convention
/// 10·log10(255² / MSE₂₅₅) because both rescale the same ratio.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(PSNR_CAP);
    }
    Ok((10.0 * (1.0 / m).log10()).min(PSNR_CAP))
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// Structural similarity: mean local SSIM over all fully interior 11x11
/// Gaussian windows (sigma 1.5), dynamic range 1. Result in [-1, 1];
/// exactly 1 for identical images.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::dims(
            "ssim image sizes",
            a.width() * a.height(),
            b.width() * b.height(),
        ));
    }
    if a.width() < SSIM_WINDOW || a.height() < SSIM_WINDOW {
        return Err(Error::InvalidParameter(format!(
            "ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {}x{}",
            a.width(),
            a.height()
        )));
    }

    let kernel = gaussian_kernel();
    let c1 = SSIM_K1 * SSIM_K1;
    let c2 = SSIM_K2 * SSIM_K2;
    let mut total = 0.0;
    let mut count = 0usize;
    for wr in 0..=(a.height() - SSIM_WINDOW) {
        for wc in 0..=(a.width() - SSIM_WINDOW) {
            let mut mu_x = 0.0;
            let mut mu_y = 0.0;
            for kr in 0..SSIM_WINDOW {
                for kc in 0..SSIM_WINDOW {
                    let w = kernel[kr * SSIM_WINDOW + kc];
                    mu_x += w * a.get(wr + kr, wc + kc);
                    mu_y += w * b.get(wr + kr, wc + kc);
                }
            }
            let mut var_x = 0.0;
            let mut var_y = 0.0;
            let mut cov = 0.0;
            for kr in 0..SSIM_WINDOW {
                for kc in 0..SSIM_WINDOW {
                    let w = kernel[kr * SSIM_WINDOW + kc];
                    let dx = a.get(wr + kr, wc + kc) - mu_x;
                    let dy = b.get(wr + kr, wc + kc) - mu_y;
                    var_x += w * dx * dx;
                    var_y += w * dy * dy;
                    cov += w * dx * dy;
                }
            }
            let num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2);
            let den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2);
            total += num / den;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

fn gaussian_kernel() -> Vec<f64> {
    let half = (SSIM_WINDOW / 2) as isize;
    let mut k = Vec::with_capacity(SSIM_WINDOW * SSIM_WINDOW);
    for r in -half..=half {
        for c in -half..=half {
            let d2 = (r * r + c * c) as f64;
            k.push((-d2 / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp());
        }
    }
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}
