//! Dense reference solvers.
//!
//! Everything here inverts or factors explicit matrices, so it is only
//! usable on tiny systems. These functions define what the matrix-free
//! engines are supposed to compute and appear in tests as the second,
//! independent route to the same answer.

use crate::error::{Error, Result};
use crate::graphmodel::{DenoisingLaplacian, DirectedPerturbation};
use crate::linalg::{lu_solve, norm, CsrMatrix, DenseMatrix};

/// Hard cap on the system size the dense oracles accept.
pub const ORACLE_MAX_DIM: usize = 64;

fn checked_square(theta: &CsrMatrix) -> Result<usize> {
    let n = theta.rows();
    if theta.cols() != n {
        return Err(Error::dims("oracle interpolator shape", n, theta.cols()));
    }
    if n == 0 || n > ORACLE_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dense oracle accepts sizes 1..={ORACLE_MAX_DIM}, got {n}"
        )));
    }
    Ok(n)
}

fn checked_weight(mu: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "oracle prior weight must be positive and finite, got {mu}"
        )));
    }
    Ok(())
}

/// Stacked shift operator [[0, Θ⁻¹], [Θ, 0]] on [observed; missing]
/// signals. Each half predicts the other, so signals of the form
/// [y; Θy] are exactly shift-invariant.
pub fn dense_shift_operator(theta: &CsrMatrix) -> Result<DenseMatrix> {
    let n = checked_square(theta)?;
    let theta_d = theta.to_dense();
    let theta_inv = theta_d.inverse()?;
    let mut a = DenseMatrix::zeros(2 * n, 2 * n);
    a.set_block(0, n, &theta_inv)?;
    a.set_block(n, 0, &theta_d)?;
    Ok(a)
}

/// Normal matrix HᵀH + μ·(I − A)ᵀHᵀH(I − A) where H keeps the first
/// `m` coordinates. Built literally: zero the dropped rows of (I − A),
/// multiply, add the sampling identity block.
fn normal_matrix(a: &DenseMatrix, mu: f64, m: usize) -> Result<DenseMatrix> {
    let nn = a.rows();
    let mut top = DenseMatrix::zeros(nn, nn);
    for r in 0..m {
        for c in 0..nn {
            let id = if r == c { 1.0 } else { 0.0 };
            top.set(r, c, id - a.get(r, c));
        }
    }
    let mut c = top.transpose().matmul(&top)?.scaled(mu);
    for i in 0..m {
        c.set(i, i, c.get(i, i) + 1.0);
    }
    Ok(c)
}

/// Direct solve of the stacked interpolation problem: minimizes
/// ‖y − Hx‖² + μ‖H(x − Ax)‖² over the full signal x = [x_M; x_N] and
/// returns it. Independent of the matrix-free path: it assembles the
/// normal equations and factors them.
pub fn dense_map_solve(theta: &CsrMatrix, y: &[f64], mu: f64) -> Result<Vec<f64>> {
    let n = checked_square(theta)?;
    checked_weight(mu)?;
    if y.len() != n {
        return Err(Error::dims("oracle samples", n, y.len()));
    }
    let a = dense_shift_operator(theta)?;
    let c = normal_matrix(&a, mu, n)?;
    let mut rhs = vec![0.0; 2 * n];
    rhs[..n].copy_from_slice(y);
    lu_solve(&c, &rhs)
}

/// Normal matrix of the two-prior objective: the shift operator gets the
/// scaled perturbation added to its prediction block, and the scaled
/// Laplacian lands on the missing-signal diagonal block.
fn two_prior_system(
    theta: &CsrMatrix,
    p: &DirectedPerturbation,
    lap: &DenoisingLaplacian,
    mu: f64,
) -> Result<(DenseMatrix, usize)> {
    let n = checked_square(theta)?;
    checked_weight(mu)?;
    if p.rows() != n || p.cols() != n {
        return Err(Error::dims("oracle perturbation shape", n, p.rows()));
    }
    if lap.n() != n {
        return Err(Error::dims("oracle laplacian size", n, lap.n()));
    }
    let mut a = dense_shift_operator(theta)?;
    let p_eff = p.matrix().to_dense().scaled(p.gain());
    for i in 0..n {
        for j in 0..n {
            a.set(i, n + j, a.get(i, n + j) + p_eff.get(i, j));
        }
    }
    let mut c = normal_matrix(&a, mu, n)?;
    let l_eff = lap.matrix().to_dense().scaled(lap.gain());
    for i in 0..n {
        for j in 0..n {
            c.set(n + i, n + j, c.get(n + i, n + j) + mu * l_eff.get(i, j));
        }
    }
    Ok((c, n))
}

/// Direct solve of the two-prior problem
/// ‖y − Hx‖² + μ‖x_M − (Θ⁻¹ + P)x_N‖² + μ·x_Nᵀ L x_N,
/// returning the stacked optimum [x_M; x_N].
pub fn dense_two_prior_solve(
    theta: &CsrMatrix,
    p: &DirectedPerturbation,
    lap: &DenoisingLaplacian,
    y: &[f64],
    mu: f64,
) -> Result<Vec<f64>> {
    let (c, n) = two_prior_system(theta, p, lap, mu)?;
    if y.len() != n {
        return Err(Error::dims("oracle samples", n, y.len()));
    }
    let mut rhs = vec![0.0; 2 * n];
    rhs[..n].copy_from_slice(y);
    lu_solve(&c, &rhs)
}

/// Norm of the stationarity defect C·x − Hᵀy of the two-prior objective
/// at `x`; the objective gradient there is exactly twice this vector.
pub fn two_prior_stationarity_residual(
    theta: &CsrMatrix,
    p: &DirectedPerturbation,
    lap: &DenoisingLaplacian,
    y: &[f64],
    mu: f64,
    x: &[f64],
) -> Result<f64> {
    let (c, n) = two_prior_system(theta, p, lap, mu)?;
    if y.len() != n {
        return Err(Error::dims("oracle samples", n, y.len()));
    }
    if x.len() != 2 * n {
        return Err(Error::dims("oracle stacked signal", 2 * n, x.len()));
    }
    let cx = c.matvec(x)?;
    let defect: Vec<f64> = (0..2 * n)
        .map(|i| cx[i] - if i < n { y[i] } else { 0.0 })
        .collect();
    Ok(norm(&defect))
}

/// Two-prior objective value at an arbitrary stacked signal [x_M; x_N].
pub fn objective_value_two_prior(
    x: &[f64],
    y: &[f64],
    theta: &CsrMatrix,
    p: &DirectedPerturbation,
    lap: &DenoisingLaplacian,
    mu: f64,
) -> Result<f64> {
    let n = checked_square(theta)?;
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "objective weight must be finite and nonnegative, got {mu}"
        )));
    }
    if p.rows() != n || p.cols() != n {
        return Err(Error::dims("objective perturbation shape", n, p.rows()));
    }
    if lap.n() != n {
        return Err(Error::dims("objective laplacian size", n, lap.n()));
    }
    if x.len() != 2 * n {
        return Err(Error::dims("objective stacked signal", 2 * n, x.len()));
    }
    if y.len() != n {
        return Err(Error::dims("objective samples", n, y.len()));
    }
    let theta_inv = theta.to_dense().inverse()?;
    let p_eff = p.matrix().to_dense().scaled(p.gain());
    let x_m = &x[..n];
    let x_n = &x[n..];
    let mut fidelity = 0.0;
    let mut shift_prior = 0.0;
    for i in 0..n {
        let e = y[i] - x_m[i];
        fidelity += e * e;
        let mut pred = 0.0;
        for j in 0..n {
            pred += (theta_inv.get(i, j) + p_eff.get(i, j)) * x_n[j];
        }
        let r = x_m[i] - pred;
        shift_prior += r * r;
    }
    let lx = lap.apply(x_n)?;
    let smooth_prior: f64 = x_n.iter().zip(&lx).map(|(a, b)| a * b).sum();
    Ok(fidelity + mu * (shift_prior + smooth_prior))
}

/// Two-stage perturbed interpolation in closed form. The first stage
/// folds into the base interpolator, Θ̃ = (I + ΘP)⁻¹Θ, and the second
/// perturbation is applied to that refined interpolator:
/// (I + Θ̃P⁽²⁾)x = Θ̃y. Returns the missing-pixel solution.
pub fn cascade_interpolate_dense(
    theta: &CsrMatrix,
    p: &DirectedPerturbation,
    p2: &DirectedPerturbation,
    y: &[f64],
) -> Result<Vec<f64>> {
    let n = checked_square(theta)?;
    for (label, q) in [("first", p), ("second", p2)] {
        if q.rows() != n || q.cols() != n {
            return Err(Error::InvalidParameter(format!(
                "cascade {label} perturbation must be {n} x {n}, got {} x {}",
                q.rows(),
                q.cols()
            )));
        }
    }
    if y.len() != n {
        return Err(Error::dims("cascade samples", n, y.len()));
    }
    let theta_d = theta.to_dense();
    let p_eff = p.matrix().to_dense().scaled(p.gain());
    let mut first = theta_d.matmul(&p_eff)?;
    for i in 0..n {
        first.set(i, i, first.get(i, i) + 1.0);
    }
    let theta_tilde = first.inverse()?.matmul(&theta_d)?;
    let x_star = theta_tilde.matvec(y)?;
    let p2_eff = p2.matrix().to_dense().scaled(p2.gain());
    let mut second = theta_tilde.matmul(&p2_eff)?;
    for i in 0..n {
        second.set(i, i, second.get(i, i) + 1.0);
    }
    lu_solve(&second, &x_star)
}
