use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, LinearOperator, SolveOutcome};

/// Relative threshold below which a BiCG inner product counts as vanished.
const BREAKDOWN_REL: f64 = 1e-14;

/// Per-iteration step coefficients for an unrolled solver.
///
/// Entry `k` holds the (alpha, beta) pair used at iteration `k`. `beta[0]`
/// multiplies the zero vector and therefore never affects the result; it is
/// kept so both lists share one length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSchedule {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl LayerSchedule {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let s = LayerSchedule { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.beta.len() {
            return Err(Error::InvalidConstruction(format!(
                "schedule lists differ in length: {} alpha vs {} beta",
                self.alpha.len(),
                self.beta.len()
            )));
        }
        if let Some(i) = self
            .alpha
            .iter()
            .chain(self.beta.iter())
            .position(|v| !v.is_finite())
        {
            return Err(Error::InvalidConstruction(format!(
                "schedule contains a non-finite coefficient (flat index {i})"
            )));
        }
        Ok(())
    }
}

/// Biconjugate gradient for square, possibly asymmetric operators.
///
/// Without a schedule this is classical BiCG: dual residual recurrences
/// drive the alpha/beta formulas and iteration stops once
/// `‖b − Ax‖ ≤ tol·‖b‖` or `max_iters` is hit. With a schedule the
/// coefficients are read from it instead, the loop runs exactly
/// `schedule.len()` iterations with no early exit, and no inner product is
/// ever divided by, so the scheduled path cannot break down.
///
/// Feeding back the coefficients recorded by [`bicg_solve_traced`]
/// reproduces the classical run bit for bit: both modes execute the same
/// update statements and differ only in where alpha and beta come from.
pub fn bicg_solve<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    schedule: Option<&LayerSchedule>,
    max_iters: usize,
    tol: f64,
) -> Result<SolveOutcome> {
    bicg_inner(op, b, schedule, max_iters, tol, None)
}

/// Classical BiCG that also records the coefficients it computed, one
/// (alpha, beta) pair per iteration actually run.
pub fn bicg_solve_traced<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    max_iters: usize,
    tol: f64,
) -> Result<(SolveOutcome, LayerSchedule)> {
    let mut trace = LayerSchedule {
        alpha: Vec::new(),
        beta: Vec::new(),
    };
    let outcome = bicg_inner(op, b, None, max_iters, tol, Some(&mut trace))?;
    Ok((outcome, trace))
}

fn bicg_inner<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[f64],
    schedule: Option<&LayerSchedule>,
    max_iters: usize,
    tol: f64,
    mut trace: Option<&mut LayerSchedule>,
) -> Result<SolveOutcome> {
    let n = op.in_dim();
    if op.out_dim() != n {
        return Err(Error::dims("bicg square operator", n, op.out_dim()));
    }
    if b.len() != n {
        return Err(Error::dims("bicg right-hand side", n, b.len()));
    }
    if let Some(s) = schedule {
        s.validate()?;
    }
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(SolveOutcome {
            x: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
        });
    }
    let total = schedule.map_or(max_iters, |s| s.len());

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = vec![0.0; n];
    // The shadow sequence exists only to produce coefficients; the
    // scheduled path never touches it.
    let mut r_sh = r.clone();
    let mut p_sh = vec![0.0; n];
    let mut rho_prev = 1.0;
    let mut iterations = 0;
    let mut residual = 1.0;

    for k in 0..total {
        let beta = match schedule {
            Some(s) => s.beta[k],
            None => {
                let rho = dot(&r_sh, &r);
                if rho.abs() <= BREAKDOWN_REL * norm(&r_sh) * norm(&r) {
                    return Err(Error::Breakdown {
                        iteration: k,
                        quantity: "shadow inner product rho",
                    });
                }
                let beta = if k == 0 { 0.0 } else { rho / rho_prev };
                rho_prev = rho;
                beta
            }
        };
        // beta[0] scales the zero vector, so iteration 0 searches along r in
        // both modes.
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        let q = op.apply(&p)?;
        let alpha = match schedule {
            Some(s) => s.alpha[k],
            None => {
                for i in 0..n {
                    p_sh[i] = r_sh[i] + beta * p_sh[i];
                }
                let q_sh = op.apply_transpose(&p_sh)?;
                let sigma = dot(&p_sh, &q);
                if sigma.abs() <= BREAKDOWN_REL * norm(&p_sh) * norm(&q) {
                    return Err(Error::Breakdown {
                        iteration: k,
                        quantity: "pivot inner product sigma",
                    });
                }
                let alpha = rho_prev / sigma;
                for i in 0..n {
                    r_sh[i] -= alpha * q_sh[i];
                }
                alpha
            }
        };
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        residual = norm(&r) / b_norm;
        iterations = k + 1;
        if !residual.is_finite() {
            return Err(Error::Diverged { iteration: k });
        }
        if let Some(t) = trace.as_deref_mut() {
            t.alpha.push(alpha);
            t.beta.push(beta);
        }
        if schedule.is_none() && residual <= tol {
            break;
        }
    }

    Ok(SolveOutcome {
        x,
        iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cg_solve, lu_solve, DenseMatrix, DEFAULT_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(got: &[f64], want: &[f64]) -> f64 {
        let d: f64 = got
            .iter()
            .zip(want)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        d / norm(want)
    }

    /// I + small random perturbation: asymmetric but safely nonsingular.
    fn near_identity(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = DenseMatrix::identity(n);
        for r in 0..n {
            for c in 0..n {
                let v = a.get(r, c) + rng.gen_range(-0.4..0.4) / n as f64;
                a.set(r, c, v);
            }
        }
        a
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let id = DenseMatrix::identity(3);
        let out = bicg_solve(&id, &[2.0, -1.0, 0.5], None, 10, DEFAULT_TOL).unwrap();
        assert_eq!(out.x, vec![2.0, -1.0, 0.5]);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn matches_lu_on_asymmetric_instance() {
        let a = near_identity(8, 42);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let got = bicg_solve(&a, &b, None, 64, 1e-12).unwrap();
        let want = lu_solve(&a, &b).unwrap();
        assert!(rel_err(&got.x, &want) <= 1e-6);
    }

    #[test]
    fn agrees_with_cg_on_symmetric_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 8;
        let mut g = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                g.set(r, c, rng.gen_range(-0.25..0.25));
            }
        }
        let mut a = g.transpose().matmul(&g).unwrap();
        for i in 0..n {
            a.set(i, i, a.get(i, i) + 1.0);
        }
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let via_bicg = bicg_solve(&a, &b, None, 4 * n, 1e-12).unwrap();
        let via_cg = cg_solve(&a, &b, 4 * n, 1e-12).unwrap();
        assert!(rel_err(&via_bicg.x, &via_cg.x) <= 1e-8);
    }

    #[test]
    fn traced_coefficients_replay_bit_for_bit() {
        let a = near_identity(8, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let b: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (classical, schedule) = bicg_solve_traced(&a, &b, 64, 1e-10).unwrap();
        assert_eq!(schedule.len(), classical.iterations);
        assert_eq!(schedule.beta[0], 0.0);
        let replayed = bicg_solve(&a, &b, Some(&schedule), 64, 1e-10).unwrap();
        assert_eq!(replayed.iterations, classical.iterations);
        // Exact equality: the two runs execute identical update statements.
        assert_eq!(replayed.x, classical.x);
        assert_eq!(replayed.residual, classical.residual);
    }

    #[test]
    fn scheduled_mode_never_exits_early() {
        let id = DenseMatrix::identity(2);
        // Iteration 0 already solves the system; the remaining scheduled
        // steps must still run.
        let schedule = LayerSchedule::new(vec![1.0, 0.5, 0.5], vec![0.0, 0.0, 0.0]).unwrap();
        let out = bicg_solve(&id, &[1.0, 2.0], Some(&schedule), 1, DEFAULT_TOL).unwrap();
        assert_eq!(out.iterations, 3);
        assert_eq!(out.x, vec![1.0, 2.0]);
        assert_eq!(out.residual, 0.0);
    }

    #[test]
    fn breakdown_reports_iteration() {
        // Antisymmetric permutation: the first pivot inner product is exactly 0.
        let a = DenseMatrix::from_row_major(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        match bicg_solve(&a, &[1.0, 0.0], None, 10, DEFAULT_TOL) {
            Err(Error::Breakdown {
                iteration,
                quantity,
            }) => {
                assert_eq!(iteration, 0);
                assert!(quantity.contains("sigma"));
            }
            other => panic!("expected breakdown, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_schedule_lists_rejected() {
        assert!(LayerSchedule::new(vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(LayerSchedule::new(vec![f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn zero_rhs_short_circuits() {
        let id = DenseMatrix::identity(2);
        let out = bicg_solve(&id, &[0.0, 0.0], None, 10, DEFAULT_TOL).unwrap();
        assert_eq!(out.x, vec![0.0, 0.0]);
        assert_eq!(out.iterations, 0);
    }
}
