//! Seeded instance builders shared by the benchmark targets, so every
//! bench times the same deterministic inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsv_interp::graphmodel::{
    build_bilinear_theta, build_denoising_laplacian, build_directed_perturbation,
    checkerboard_partition, extract_features, BaseInterpolator, DenoisingLaplacian,
    DirectedPerturbation, EdgeParams, MetricMatrix, PixelPartition, PixelSet, FEATURE_DIM,
};
use gsv_interp::imaging::{baseline_interpolate, GrayImage};
use gsv_interp::linalg::CsrMatrix;
use gsv_interp::model::GsvModel;

/// Diagonal gradient with seeded noise; structured and nonsmooth enough
/// that graph weights vary across the patch.
pub fn noisy_ramp(size: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ size as u64);
    let denom = (2 * size) as f64;
    let pixels = (0..size * size)
        .map(|i| {
            let (r, c) = (i / size, i % size);
            let base = (r + c) as f64 / denom;
            (0.15 + 0.7 * base + rng.gen_range(-0.05..0.05)).clamp(0.0, 1.0)
        })
        .collect();
    GrayImage::new(size, size, pixels).expect("square patch dimensions are valid")
}

/// Model with both graph systems active.
pub fn gained_model(perturbation_gain: f64, smoothing_gain: f64) -> GsvModel {
    let mut model = GsvModel::default();
    model.perturbation_gain = perturbation_gain;
    model.smoothing_gain = smoothing_gain;
    model.validate().expect("bench gains are in range");
    model
}

/// Everything a solver needs for one masked patch.
pub struct PatchInstance {
    pub part: PixelPartition,
    pub theta: BaseInterpolator,
    pub p: DirectedPerturbation,
    pub lap: DenoisingLaplacian,
    pub y: Vec<f64>,
}

/// Builds the full graph stack for a ground-truth patch: mask, base
/// interpolator, features of the baseline estimate, then both graphs at
/// the given gains.
pub fn patch_instance(truth: &GrayImage, s: f64, s2: f64) -> PatchInstance {
    let part = checkerboard_partition(truth.width(), truth.height()).expect("valid patch");
    let y = part.gather_observed(truth.pixels()).expect("sizes agree");
    let theta = build_bilinear_theta(&part).expect("bilinear stencil");
    let baseline = baseline_interpolate(&y, &part, &theta).expect("baseline");
    let metric = MetricMatrix::identity(FEATURE_DIM);
    let edges = EdgeParams::default();
    let f_obs = extract_features(&baseline, &part, PixelSet::Observed).expect("features");
    let f_mis = extract_features(&baseline, &part, PixelSet::Missing).expect("features");
    let mut p =
        build_directed_perturbation(&f_obs, &f_mis, &metric, &edges, &part).expect("perturbation");
    p.set_gain(s).expect("gain in range");
    let mut lap = build_denoising_laplacian(&f_mis, &metric, &edges, &part).expect("laplacian");
    lap.set_gain(s2).expect("gain in range");
    PatchInstance {
        part,
        theta,
        p,
        lap,
        y,
    }
}

/// Random diagonally dominant square interpolator for the dense oracle
/// benches, which need invertible Θ of modest size.
pub fn square_theta(n: usize, seed: u64) -> CsrMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.3 / n as f64;
    let mut triplets = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let v = if r == c {
                1.0
            } else {
                rng.gen_range(-scale..scale)
            };
            triplets.push((r, c, v));
        }
    }
    CsrMatrix::from_triplets(n, n, &triplets).expect("dense triplet grid is valid")
}
