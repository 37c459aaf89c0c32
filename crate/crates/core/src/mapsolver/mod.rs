//! Interpolation engines.
//!
//! The matrix-free path solves the perturbed system (I + ΘP)x = Θy and the
//! full two-prior problem via Douglas-Rachford splitting, where each
//! iteration is one h-step (perturbed interpolation with a correction
//! term), one g-step (Laplacian denoising prox), and one x-update. Layer
//! counts are fixed, so a run behaves like an unrolled network whose
//! per-iteration coefficients can be overridden by schedules.
//!
//! The dense oracles invert small systems outright and exist to check the
//! matrix-free path; they are gated to tiny dimensions and never run in
//! the image pipeline.

mod oracle;
mod params;
mod solve;

pub use oracle::{
    cascade_interpolate_dense, dense_map_solve, dense_shift_operator, dense_two_prior_solve,
    objective_value_two_prior, two_prior_stationarity_residual, ORACLE_MAX_DIM,
};
pub use params::{DrBicgSchedule, SolverParams};
pub use solve::{
    dr_run, dr_run_adaptive, dr_run_detailed, dr_run_raw, dr_update, g_step, g_step_raw, h_step,
    h_step_raw, objective_value, perturbed_interpolate, perturbed_interpolate_raw, DenoisingSystem,
    DrRunStats, DrState, PerturbedSystem, INNER_TOL,
};
