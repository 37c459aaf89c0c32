use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imaging::{extract_patches, GrayImage, PatchGrid};

/// Ground-truth patches split into a training set and a held-out
/// validation set. Every patch must admit the checkerboard mask, so an
/// even pixel count is required (the observed and missing halves then
/// have equal size).
#[derive(Debug, Clone)]
pub struct PatchDataset {
    train: Vec<GrayImage>,
    val: Vec<GrayImage>,
}

impl PatchDataset {
    pub fn new(train: Vec<GrayImage>, val: Vec<GrayImage>) -> Result<Self> {
        if train.is_empty() {
            return Err(Error::InvalidParameter(
                "dataset needs at least one training patch".into(),
            ));
        }
        if val.is_empty() {
            return Err(Error::InvalidParameter(
                "dataset needs at least one validation patch".into(),
            ));
        }
        for p in train.iter().chain(val.iter()) {
            check_patch(p)?;
        }
        Ok(PatchDataset { train, val })
    }

    /// Shuffles the patches with a seeded generator and carves off
    /// `val_fraction` of them (at least one on each side) for validation.
    pub fn split(mut patches: Vec<GrayImage>, val_fraction: f64, seed: u64) -> Result<Self> {
        if !(val_fraction > 0.0 && val_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "validation fraction must lie strictly between 0 and 1, got {val_fraction}"
            )));
        }
        if patches.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 patches to split, got {}",
                patches.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        patches.shuffle(&mut rng);
        let n_val = ((patches.len() as f64 * val_fraction).round() as usize)
            .max(1)
            .min(patches.len() - 1);
        let train = patches.split_off(n_val);
        PatchDataset::new(train, patches)
    }

    /// Cuts one image into grid patches and splits them.
    pub fn from_image(
        img: &GrayImage,
        grid: &PatchGrid,
        val_fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        let patches = extract_patches(img, grid)?
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        PatchDataset::split(patches, val_fraction, seed)
    }

    pub fn train(&self) -> &[GrayImage] {
        &self.train
    }

    pub fn val(&self) -> &[GrayImage] {
        &self.val
    }
}

fn check_patch(p: &GrayImage) -> Result<()> {
    if p.width() < 2 || p.height() < 2 {
        return Err(Error::InvalidParameter(format!(
            "patch {}x{} too small, need at least 2x2",
            p.width(),
            p.height()
        )));
    }
    if (p.width() * p.height()) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "patch {}x{} has an odd pixel count, checkerboard halves would be unequal",
            p.width(),
            p.height()
        )));
    }
    Ok(())
}
