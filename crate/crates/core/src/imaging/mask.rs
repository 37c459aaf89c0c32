use crate::error::Result;
use crate::graphmodel::{checkerboard_partition, BaseInterpolator, PixelPartition};
use crate::imaging::GrayImage;

/// Splits an image under the checkerboard mask: returns the observed
/// values in canonical M order together with the partition.
pub fn apply_checkerboard_mask(img: &GrayImage) -> Result<(Vec<f64>, PixelPartition)> {
    let part = checkerboard_partition(img.width(), img.height())?;
    let y = part.gather_observed(img.pixels())?;
    Ok((y, part))
}

/// The image with missing pixels zeroed; observed pixels untouched.
pub fn masked_image(img: &GrayImage, part: &PixelPartition) -> Result<GrayImage> {
    let y = part.gather_observed(img.pixels())?;
    let zeros = vec![0.0; part.n_len()];
    GrayImage::new(img.width(), img.height(), part.scatter(&y, &zeros)?)
}

/// Mask visualization: observed pixels white, missing black.
pub fn mask_image(part: &PixelPartition) -> Result<GrayImage> {
    let ones = vec![1.0; part.m_len()];
    let zeros = vec![0.0; part.n_len()];
    GrayImage::new(part.width(), part.height(), part.scatter(&ones, &zeros)?)
}

/// Full image from the base interpolator alone: observed pixels pass
/// through untouched, missing pixels get the averaged estimate.
pub fn baseline_interpolate(
    y: &[f64],
    part: &PixelPartition,
    theta: &BaseInterpolator,
) -> Result<GrayImage> {
    let missing = theta.interpolate(y)?;
    GrayImage::new(part.width(), part.height(), part.scatter(y, &missing)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphmodel::build_bilinear_theta;

    #[test]
    fn two_by_two_observed_order() {
        let img = GrayImage::new(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let (y, part) = apply_checkerboard_mask(&img).unwrap();
        assert_eq!(y, vec![0.1, 0.4]);
        assert_eq!(part.n_len(), 2);
    }

    #[test]
    fn full_patch_observation_count() {
        let img = GrayImage::constant(64, 64, 0.5).unwrap();
        let (y, _) = apply_checkerboard_mask(&img).unwrap();
        assert_eq!(y.len(), 2048);
    }

    #[test]
    fn mask_plus_truth_reconstructs_exactly() {
        let img = GrayImage::from_fn(6, 4, |r, c| ((r * 7 + c * 3) % 10) as f64 / 9.0).unwrap();
        let (y, part) = apply_checkerboard_mask(&img).unwrap();
        let truth_missing = part.gather_missing(img.pixels()).unwrap();
        let rebuilt = part.scatter(&y, &truth_missing).unwrap();
        assert_eq!(rebuilt, img.pixels());
    }

    #[test]
    fn masked_image_zeroes_exactly_the_missing_half() {
        let img = GrayImage::constant(4, 4, 0.8).unwrap();
        let (_, part) = apply_checkerboard_mask(&img).unwrap();
        let masked = masked_image(&img, &part).unwrap();
        let zeros = masked.pixels().iter().filter(|&&v| v == 0.0).count();
        assert_eq!(zeros, 8);
        for &(r, c) in part.m_index() {
            assert_eq!(masked.get(r, c), 0.8);
        }
    }

    #[test]
    fn baseline_passes_observed_through_bitwise() {
        let img = GrayImage::from_fn(6, 6, |r, c| ((r * 11 + c * 5) % 13) as f64 / 12.0).unwrap();
        let (y, part) = apply_checkerboard_mask(&img).unwrap();
        let theta = build_bilinear_theta(&part).unwrap();
        let out = baseline_interpolate(&y, &part, &theta).unwrap();
        for (i, &(r, c)) in part.m_index().iter().enumerate() {
            assert_eq!(out.get(r, c), y[i]);
        }
    }

    #[test]
    fn two_by_two_baseline_averages_corners() {
        let img = GrayImage::new(2, 2, vec![0.2, 0.0, 0.0, 0.6]).unwrap();
        let (y, part) = apply_checkerboard_mask(&img).unwrap();
        let theta = build_bilinear_theta(&part).unwrap();
        let out = baseline_interpolate(&y, &part, &theta).unwrap();
        let expect = (0.2 + 0.6) / 2.0;
        assert!((out.get(0, 1) - expect).abs() <= 1e-15);
        assert!((out.get(1, 0) - expect).abs() <= 1e-15);
    }

    #[test]
    fn constant_baseline_stays_constant() {
        let img = GrayImage::constant(8, 8, 0.35).unwrap();
        let (y, part) = apply_checkerboard_mask(&img).unwrap();
        let theta = build_bilinear_theta(&part).unwrap();
        let out = baseline_interpolate(&y, &part, &theta).unwrap();
        for &v in out.pixels() {
            assert!((v - 0.35).abs() <= 1e-12);
        }
    }
}
