//! Whole-image interpolation: mask-aware patch decomposition, per-patch
//! solves, and windowed fusion back onto the canvas.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphmodel::{
    build_bilinear_theta, build_denoising_laplacian, build_directed_perturbation,
    extract_features, BaseInterpolator, PixelPartition, PixelSet,
};
use crate::imaging::{baseline_interpolate, fuse_patches, patch_positions, GrayImage, PatchGrid};
use crate::mapsolver::{dr_run_detailed, perturbed_interpolate_raw, DrRunStats};
use crate::model::GsvModel;

/// Which engine fills the missing pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Plain base interpolation, no graphs.
    Baseline,
    /// Single signed-graph correction of the base interpolation.
    Perturbed,
    /// Full splitting run with both graphs.
    Dr,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Baseline => "baseline",
            Mode::Perturbed => "perturbed",
            Mode::Dr => "dr",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Mode::Baseline),
            "perturbed" => Ok(Mode::Perturbed),
            "dr" => Ok(Mode::Dr),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode '{other}' (expected baseline, perturbed, or dr)"
            ))),
        }
    }
}

/// Everything derived from one masked patch before a solve runs.
pub struct PatchContext {
    part: PixelPartition,
    theta: BaseInterpolator,
    y: Vec<f64>,
    baseline: GrayImage,
}

impl PatchContext {
    /// `origin` is the patch's top-left corner on the full canvas; it
    /// fixes which diagonal of the checkerboard is observed inside the
    /// patch, so partitions stay aligned with the global mask.
    pub fn new(patch: &GrayImage, origin: (usize, usize)) -> Result<Self> {
        let (w, h) = (patch.width(), patch.height());
        let mask: Vec<bool> = (0..h)
            .flat_map(|r| (0..w).map(move |c| (origin.0 + r + origin.1 + c) % 2 == 0))
            .collect();
        let part = PixelPartition::from_mask(w, h, mask)?;
        let y = part.gather_observed(patch.pixels())?;
        let theta = build_bilinear_theta(&part)?;
        let baseline = baseline_interpolate(&y, &part, &theta)?;
        Ok(PatchContext {
            part,
            theta,
            y,
            baseline,
        })
    }

    pub fn partition(&self) -> &PixelPartition {
        &self.part
    }

    pub fn baseline(&self) -> &GrayImage {
        &self.baseline
    }
}

/// Interpolates one masked patch. Missing-pixel values in `patch` are
/// ignored; only the checkerboard-observed samples feed the solve.
pub fn interpolate_patch(
    patch: &GrayImage,
    origin: (usize, usize),
    model: &GsvModel,
    mode: Mode,
) -> Result<GrayImage> {
    Ok(run_patch(patch, origin, model, mode)?.0)
}

/// [`interpolate_patch`] plus the inner-solver counters, for callers that
/// report or benchmark solver work.
pub fn interpolate_patch_detailed(
    patch: &GrayImage,
    origin: (usize, usize),
    model: &GsvModel,
    mode: Mode,
) -> Result<(GrayImage, DrRunStats)> {
    run_patch(patch, origin, model, mode)
}

fn run_patch(
    patch: &GrayImage,
    origin: (usize, usize),
    model: &GsvModel,
    mode: Mode,
) -> Result<(GrayImage, DrRunStats)> {
    let ctx = PatchContext::new(patch, origin)?;
    let mut stats = DrRunStats::default();
    if mode == Mode::Baseline {
        return Ok((ctx.baseline, stats));
    }

    let metric = model.metric()?;
    let f_obs = extract_features(&ctx.baseline, &ctx.part, PixelSet::Observed)?;
    let f_mis = extract_features(&ctx.baseline, &ctx.part, PixelSet::Missing)?;
    let mut p = build_directed_perturbation(&f_obs, &f_mis, &metric, &model.edges, &ctx.part)?;
    p.set_gain(model.perturbation_gain)?;

    let x = match mode {
        Mode::Baseline => unreachable!(),
        Mode::Perturbed => {
            let outcome = perturbed_interpolate_raw(ctx.theta.theta(), &p, &ctx.y, &model.solver)?;
            stats.bicg_iterations = outcome.iterations;
            stats.final_bicg_residual = outcome.residual;
            outcome.x
        }
        Mode::Dr => {
            let mut lap = build_denoising_laplacian(&f_mis, &metric, &model.edges, &ctx.part)?;
            lap.set_gain(model.smoothing_gain)?;
            let (x, run_stats) = dr_run_detailed(&ctx.theta, &p, &lap, &ctx.y, &model.solver)?;
            stats = run_stats;
            x
        }
    };
    // Estimates can stray outside the sample range; pin them back before
    // scattering so the output is a displayable image.
    let x: Vec<f64> = x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let pixels = ctx.part.scatter(&ctx.y, &x)?;
    Ok((
        GrayImage::new(patch.width(), patch.height(), pixels)?,
        stats,
    ))
}

/// Summary of one whole-image run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: String,
    pub width: usize,
    pub height: usize,
    pub patch_size: usize,
    pub stride: usize,
    pub patches: usize,
    pub bicg_iterations: usize,
    pub cg_iterations: usize,
    /// Worst final inner-solve residuals over all patches.
    pub max_bicg_residual: f64,
    pub max_cg_residual: f64,
    pub elapsed_ms: f64,
}

/// Interpolates a whole checkerboard-masked image patchwise.
///
/// The requested patch size shrinks to fit small inputs and is forced
/// even so every patch splits into equal observed and missing halves.
/// Observed pixels are copied through from the input verbatim.
pub fn interpolate_image(
    img: &GrayImage,
    model: &GsvModel,
    mode: Mode,
    grid: &PatchGrid,
) -> Result<(GrayImage, RunReport)> {
    model.validate()?;
    let started = Instant::now();
    let (w, h) = (img.width(), img.height());
    let mut patch = grid.patch_size().min(w).min(h);
    if patch % 2 == 1 {
        patch -= 1;
    }
    if patch < 2 {
        return Err(Error::InvalidParameter(format!(
            "image {w}x{h} is too small to interpolate (need at least 2x2)"
        )));
    }
    let eff = PatchGrid::new(patch, grid.stride().min(patch))?;
    let positions = patch_positions(w, h, &eff)?;

    let results: Vec<(GrayImage, DrRunStats)> = positions
        .par_iter()
        .map(|&(r, c)| {
            let cropped = img.crop(r, c, patch, patch)?;
            run_patch(&cropped, (r, c), model, mode).map_err(|e| e.at_patch(r, c))
        })
        .collect::<Result<_>>()?;

    let patches: Vec<GrayImage> = results.iter().map(|(p, _)| p.clone()).collect();
    let fused = fuse_patches(&patches, &positions, &eff, w, h)?;

    let mut pixels = fused.pixels().to_vec();
    for r in 0..h {
        for c in 0..w {
            if (r + c) % 2 == 0 {
                pixels[r * w + c] = img.get(r, c);
            }
        }
    }
    let out = GrayImage::new(w, h, pixels)?;

    let report = RunReport {
        mode: mode.to_string(),
        width: w,
        height: h,
        patch_size: patch,
        stride: eff.stride(),
        patches: positions.len(),
        bicg_iterations: results.iter().map(|(_, s)| s.bicg_iterations).sum(),
        cg_iterations: results.iter().map(|(_, s)| s.cg_iterations).sum(),
        max_bicg_residual: results
            .iter()
            .map(|(_, s)| s.final_bicg_residual)
            .fold(0.0, f64::max),
        max_cg_residual: results
            .iter()
            .map(|(_, s)| s.final_cg_residual)
            .fold(0.0, f64::max),
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok((out, report))
}
