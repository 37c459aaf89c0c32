use crate::error::{Error, Result};
use crate::linalg::{dot, norm, LinearOperator, SolveOutcome};

/// Conjugate gradient for symmetric positive definite operators.
///
/// Stops once `‖b − Ax‖ ≤ tol·‖b‖` or after `max_iters` iterations,
/// whichever comes first; the outcome reports the relative residual either
/// way. Positive definiteness is the caller's contract; non-positive
/// curvature along a search direction is reported as a typed error instead
/// of producing garbage.
pub fn cg_solve<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    max_iters: usize,
    tol: f64,
) -> Result<SolveOutcome> {
    let n = op.in_dim();
    if op.out_dim() != n {
        return Err(Error::dims("cg square operator", n, op.out_dim()));
    }
    if b.len() != n {
        return Err(Error::dims("cg right-hand side", n, b.len()));
    }
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(SolveOutcome {
            x: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
        });
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs_old = dot(&r, &r);
    let mut iterations = 0;
    let mut residual = 1.0;

    for k in 0..max_iters {
        let q = op.apply(&p)?;
        let curvature = dot(&p, &q);
        if curvature <= 0.0 {
            return Err(Error::IndefiniteOperator { iteration: k });
        }
        let alpha = rs_old / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rs_new = dot(&r, &r);
        residual = rs_new.sqrt() / b_norm;
        iterations = k + 1;
        if !residual.is_finite() {
            return Err(Error::Diverged { iteration: k });
        }
        if residual <= tol {
            break;
        }
        let beta = rs_new / rs_old;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rs_old = rs_new;
    }

    Ok(SolveOutcome {
        x,
        iterations,
        residual,
    })
}
