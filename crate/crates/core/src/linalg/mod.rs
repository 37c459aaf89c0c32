//! Dense and sparse matrix types plus the iterative solvers used by the
//! interpolation pipeline.
//!
//! The conjugate-gradient and biconjugate-gradient routines operate on
//! anything implementing [`LinearOperator`], so systems like `I + ΘP` are
//! applied matrix-free without ever forming the product. LU with partial
//! pivoting serves as the dense reference path the iterative solvers are
//! checked against.

mod bicg;
mod cg;
mod dense;
mod operator;
mod sparse;

pub use bicg::{bicg_solve, bicg_solve_traced, LayerSchedule};
pub use cg::cg_solve;
pub use dense::{lu_solve, DenseMatrix, LuFactors};
pub use operator::LinearOperator;
pub use sparse::CsrMatrix;

/// Default relative-residual stopping tolerance for the iterative solvers.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Outcome of an iterative solve: the solution, how many iterations ran, and
/// the final relative residual `‖b − Ax‖ / ‖b‖`.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
