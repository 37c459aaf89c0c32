use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsv_interp::imaging::GrayImage;
use gsv_interp::model::GsvModel;
use gsv_interp::pipeline::{interpolate_patch_detailed, Mode};

use crate::failure::Failure;

/// Times the two solver paths on one synthetic patch per size and prints
/// a CSV row each. Iteration counts are deterministic for a fixed seed;
/// times of course are not.
pub fn bench(sizes: &[usize], seed: u64) -> Result<(), Failure> {
    let mut model = GsvModel::default();
    // Small nonzero gains so both graph systems actually get solved.
    model.perturbation_gain = 0.2;
    model.smoothing_gain = 0.1;
    model
        .validate()
        .map_err(|e| Failure::runtime(e.to_string()))?;

    println!("size,bicg_iterations,bicg_ms,dr_bicg_iterations,dr_cg_iterations,dr_ms");
    for &size in sizes {
        if size < 2 || size % 2 != 0 {
            return Err(Failure::input(format!(
                "patch size must be even and at least 2, got {size}"
            )));
        }
        let patch = synthetic_patch(size, seed);

        let started = Instant::now();
        let (_, pstats) = interpolate_patch_detailed(&patch, (0, 0), &model, Mode::Perturbed)?;
        let bicg_ms = started.elapsed().as_secs_f64() * 1e3;

        let started = Instant::now();
        let (_, dstats) = interpolate_patch_detailed(&patch, (0, 0), &model, Mode::Dr)?;
        let dr_ms = started.elapsed().as_secs_f64() * 1e3;

        println!(
            "{size},{},{bicg_ms:.3},{},{},{dr_ms:.3}",
            pstats.bicg_iterations, dstats.bicg_iterations, dstats.cg_iterations
        );
    }
    Ok(())
}

/// Smooth gradient plus seeded noise: structured enough that the graph
/// weights vary, noisy enough that the solves do real work.
fn synthetic_patch(size: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ size as u64);
    let denom = (2 * size) as f64;
    let pixels = (0..size * size)
        .map(|i| {
            let (r, c) = (i / size, i % size);
            let base = (r + c) as f64 / denom;
            (base * 0.7 + 0.15 + rng.gen_range(-0.05..0.05)).clamp(0.0, 1.0)
        })
        .collect();
    GrayImage::new(size, size, pixels).expect("square patch dimensions are valid")
}
