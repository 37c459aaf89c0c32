//! Built-in self checks.
//!
//! Each check runs the production code path against an independent dense
//! reference (or a pinned identity) on small seeded instances and reports
//! one pass/fail row. The `verify` CLI subcommand prints these rows; they
//! are cheap enough to run on every install.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graphmodel::{DenoisingLaplacian, DirectedPerturbation};
use crate::imaging::PatchGrid;
use crate::linalg::{lu_solve, CsrMatrix, DenseMatrix, LinearOperator};
use crate::mapsolver::{dense_map_solve, dr_run_raw, g_step_raw, h_step_raw, DrState, SolverParams};
use crate::mapsolver::{perturbed_interpolate_raw, INNER_TOL};
use crate::model::GsvModel;
use crate::tuner::TrainConfig;

/// Outcome of one self check.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs every self check; failures never abort the remaining checks.
pub fn run_verification() -> Vec<VerifyCheck> {
    vec![
        check("closed-form optimum", closed_form_optimum),
        check("matrix-free interpolation vs dense", matrix_free_vs_dense),
        check("prox steps vs direct solves", prox_vs_direct),
        check("zero-gain baseline exactness", baseline_exactness),
        check("adjoint identity", adjoint_identity),
        check("reference defaults", reference_defaults),
    ]
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> VerifyCheck {
    match f() {
        Ok((passed, detail)) => VerifyCheck {
            name,
            passed,
            detail,
        },
        Err(e) => VerifyCheck {
            name,
            passed: false,
            detail: format!("errored: {e}"),
        },
    }
}

/// Diagonally dominant n x n interpolator stand-in: I plus small
/// off-diagonal couplings, always invertible.
fn random_theta(n: usize, rng: &mut ChaCha8Rng) -> Result<CsrMatrix> {
    let mut triplets = Vec::new();
    let scale = 0.3 / n as f64;
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
    CsrMatrix::from_triplets(n, n, &triplets)
}

fn random_perturbation(n: usize, rng: &mut ChaCha8Rng) -> Result<CsrMatrix> {
    let mut triplets = Vec::new();
    let scale = 0.3 / n as f64;
    for r in 0..n {
        for c in 0..n {
            triplets.push((r, c, rng.gen_range(-scale..scale)));
        }
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

fn path_laplacian(n: usize, weight: f64) -> Result<CsrMatrix> {
    let mut diag = vec![0.0; n];
    let mut triplets = Vec::new();
    for i in 0..n - 1 {
        triplets.push((i, i + 1, -weight));
        triplets.push((i + 1, i, -weight));
        diag[i] += weight;
        diag[i + 1] += weight;
    }
    for (i, &d) in diag.iter().enumerate() {
        triplets.push((i, i, d));
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

fn random_signal(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.2..1.0)).collect()
}

fn rel_err(got: &[f64], want: &[f64]) -> f64 {
    let num: f64 = got
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let den: f64 = want.iter().map(|b| b * b).sum::<f64>().sqrt();
    num / den.max(1e-300)
}

/// Dense (I + Θ·gain·P) for reference solves.
fn dense_perturbed_system(theta: &CsrMatrix, p: &DirectedPerturbation) -> Result<DenseMatrix> {
    let n = theta.rows();
    let prod = theta
        .to_dense()
        .matmul(&p.matrix().to_dense().scaled(p.gain()))?;
    let mut sys = DenseMatrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            sys.set(r, c, sys.get(r, c) + prod.get(r, c));
        }
    }
    Ok(sys)
}

/// The stacked-shift objective has the interpolated signal as its exact
/// optimum regardless of the prior weight; the dense solver must return
/// it to solver precision.
fn closed_form_optimum() -> Result<(bool, String)> {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for &n in &[4usize, 8] {
        for _ in 0..3 {
            let theta = random_theta(n, &mut rng)?;
            let y = random_signal(n, &mut rng);
            let theta_y = theta.apply(&y)?;
            let mut want = y.clone();
            want.extend_from_slice(&theta_y);
            for &mu in &[0.7, 13.0] {
                let got = dense_map_solve(&theta, &y, mu)?;
                worst = worst.max(rel_err(&got, &want));
            }
        }
    }
    Ok((
        worst <= TOL,
        format!("max rel err {worst:.3e} (tol {TOL:.0e})"),
    ))
}

fn matrix_free_vs_dense() -> Result<(bool, String)> {
    const TOL: f64 = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let params = SolverParams::default();
    let mut worst: f64 = 0.0;
    for &n in &[4usize, 8, 16] {
        for _ in 0..3 {
            let theta = random_theta(n, &mut rng)?;
            let p = DirectedPerturbation::from_matrix(random_perturbation(n, &mut rng)?, 0.35)?;
            let y = random_signal(n, &mut rng);
            let got = perturbed_interpolate_raw(&theta, &p, &y, &params)?.x;
            let want = lu_solve(&dense_perturbed_system(&theta, &p)?, &theta.apply(&y)?)?;
            worst = worst.max(rel_err(&got, &want));
        }
    }
    Ok((
        worst <= TOL,
        format!("max rel err {worst:.3e} (tol {TOL:.0e})"),
    ))
}

fn prox_vs_direct() -> Result<(bool, String)> {
    const G_TOL: f64 = 1e-8;
    const H_TOL: f64 = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let n = 8;
    let params = SolverParams {
        mu: 1.3,
        gamma: 0.25,
        ..SolverParams::default()
    };

    let mut state = DrState::initial(random_signal(n, &mut rng));
    state.z = random_signal(n, &mut rng);
    state.x_prev = random_signal(n, &mut rng);

    let lap = DenoisingLaplacian::from_matrix(path_laplacian(n, 0.8)?, 0.4)?;
    let g_got = g_step_raw(&lap, &state, &params)?.x;
    let mut g_sys = lap.matrix().to_dense().scaled(2.0 * params.mu * lap.gain());
    for i in 0..n {
        g_sys.set(i, i, g_sys.get(i, i) + 1.0 / params.gamma);
    }
    let u: Vec<f64> = (0..n)
        .map(|i| (2.0 * state.z[i] - state.x_curr[i]) / params.gamma)
        .collect();
    let g_err = rel_err(&g_got, &lu_solve(&g_sys, &u)?);

    let theta = random_theta(n, &mut rng)?;
    let p = DirectedPerturbation::from_matrix(random_perturbation(n, &mut rng)?, 0.3)?;
    let y = random_signal(n, &mut rng);
    let h_got = h_step_raw(&theta, &p, &y, &state, &params)?.x;
    let corrected: Vec<f64> = (0..n)
        .map(|i| y[i] + (state.x_prev[i] - state.x_curr[i]) / (2.0 * params.gamma))
        .collect();
    let h_err = rel_err(
        &h_got,
        &lu_solve(&dense_perturbed_system(&theta, &p)?, &theta.apply(&corrected)?)?,
    );

    Ok((
        g_err <= G_TOL && h_err <= H_TOL,
        format!("g rel err {g_err:.3e} (tol {G_TOL:.0e}), h rel err {h_err:.3e} (tol {H_TOL:.0e})"),
    ))
}

/// With both graph gains at zero the layered solver must reproduce the
/// base interpolation to floating-point identity.
fn baseline_exactness() -> Result<(bool, String)> {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 12;
    let theta = random_theta(n, &mut rng)?;
    let p = DirectedPerturbation::from_matrix(random_perturbation(n, &mut rng)?, 0.0)?;
    let lap = DenoisingLaplacian::from_matrix(path_laplacian(n, 0.8)?, 0.0)?;
    let y = random_signal(n, &mut rng);
    let want = theta.apply(&y)?;
    let (got, _) = dr_run_raw(&theta, &p, &lap, &y, &SolverParams::default())?;
    let worst = got
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok((
        worst <= TOL,
        format!("max abs diff {worst:.3e} (tol {TOL:.0e})"),
    ))
}

/// ⟨Ax, y⟩ = ⟨x, Aᵀy⟩ for the matrix-free perturbed system; the solver's
/// transpose route is only trustworthy if this holds.
fn adjoint_identity() -> Result<(bool, String)> {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let n = 16;
    let theta = random_theta(n, &mut rng)?;
    let p = DirectedPerturbation::from_matrix(random_perturbation(n, &mut rng)?, 0.45)?;
    let sys = crate::mapsolver::PerturbedSystem::new(&theta, &p)?;
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let x = random_signal(n, &mut rng);
        let y = random_signal(n, &mut rng);
        let ax = sys.apply(&x)?;
        let aty = sys.apply_transpose(&y)?;
        let lhs: f64 = ax.iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = x.iter().zip(&aty).map(|(a, b)| a * b).sum();
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    Ok((
        worst <= TOL,
        format!("max defect {worst:.3e} (tol {TOL:.0e})"),
    ))
}

/// Pins the reference recipe so a drive-by change to any default breaks
/// `verify` loudly.
fn reference_defaults() -> Result<(bool, String)> {
    let solver = SolverParams::default();
    let grid = PatchGrid::default();
    let train = TrainConfig::default();
    let model = GsvModel::default();
    let ok = solver.n_bicg_layers == 15
        && solver.n_dr_layers == 15
        && grid.patch_size() == 64
        && train.learning_rate == 1e-3
        && train.batch_size == 8
        && train.patience == 5
        && model.perturbation_gain == 0.0
        && model.smoothing_gain == 0.0
        && INNER_TOL == 1e-10;
    Ok((
        ok,
        format!(
            "patch {}x{}, bicg layers {}, dr layers {}, batch {}, step {}, patience {}",
            grid.patch_size(),
            grid.patch_size(),
            solver.n_bicg_layers,
            solver.n_dr_layers,
            train.batch_size,
            train.learning_rate,
            train.patience
        ),
    ))
}
