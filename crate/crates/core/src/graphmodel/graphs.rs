use crate::error::{Error, Result};
use crate::graphmodel::{feature_distance, signed_weight, unsigned_weight};
use crate::graphmodel::{EdgeParams, FeatureSet, MetricMatrix, PixelPartition};
use crate::linalg::{CsrMatrix, LinearOperator};

/// Signed directed graph from observed to missing pixels, stored as the
/// M x N weight block. The effective matrix is `gain * p`; gain starts at 0
/// so a freshly built graph perturbs nothing.
#[derive(Debug, Clone)]
pub struct DirectedPerturbation {
    p: CsrMatrix,
    gain: f64,
}

impl DirectedPerturbation {
    /// Wraps an explicit weight block. The matrix must be structurally
    /// valid and finite; `gain` scales it at application time.
    pub fn from_matrix(p: CsrMatrix, gain: f64) -> Result<Self> {
        p.validate()?;
        if !gain.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "perturbation gain must be finite, got {gain}"
            )));
        }
        Ok(DirectedPerturbation { p, gain })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.p
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn set_gain(&mut self, gain: f64) -> Result<()> {
        if !gain.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "perturbation gain must be finite, got {gain}"
            )));
        }
        self.gain = gain;
        Ok(())
    }

    /// M, rows (observed pixels).
    pub fn rows(&self) -> usize {
        self.p.rows()
    }

    /// N, columns (missing pixels).
    pub fn cols(&self) -> usize {
        self.p.cols()
    }

    /// Effective product `gain * (P v)`, v indexed over missing pixels.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.p.matvec(v)?;
        for o in &mut out {
            *o *= self.gain;
        }
        Ok(out)
    }

    /// Effective transpose product `gain * (Pᵀ v)`.
    pub fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.p.matvec_transpose(v)?;
        for o in &mut out {
            *o *= self.gain;
        }
        Ok(out)
    }
}

/// Undirected positive graph over missing pixels, stored as its Laplacian.
/// Symmetric with zero row sums by construction; `gain` (s2, nonnegative)
/// scales it at application time and starts at 0.
#[derive(Debug, Clone)]
pub struct DenoisingLaplacian {
    lap: CsrMatrix,
    gain: f64,
}

impl DenoisingLaplacian {
    /// Wraps an explicit Laplacian. Rejects matrices that are not square,
    /// not symmetric, have positive off-diagonal entries, or whose row sums
    /// stray from zero; those properties together guarantee the quadratic
    /// form is positive semidefinite, which the denoising prox relies on.
    pub fn from_matrix(lap: CsrMatrix, gain: f64) -> Result<Self> {
        lap.validate()?;
        if lap.rows() != lap.cols() {
            return Err(Error::dims("laplacian shape", lap.rows(), lap.cols()));
        }
        let dense = lap.to_dense();
        let n = lap.rows();
        for u in 0..n {
            let mut row_sum = 0.0;
            for v in 0..n {
                let luv = dense.get(u, v);
                row_sum += luv;
                if (luv - dense.get(v, u)).abs() > 1e-12 {
                    return Err(Error::InvalidConstruction(format!(
                        "laplacian asymmetric at ({u}, {v})"
                    )));
                }
                if u != v && luv > 0.0 {
                    return Err(Error::InvalidConstruction(format!(
                        "positive off-diagonal laplacian entry at ({u}, {v})"
                    )));
                }
            }
            if row_sum.abs() > 1e-9 {
                return Err(Error::InvalidConstruction(format!(
                    "laplacian row {u} sums to {row_sum}, expected 0"
                )));
            }
        }
        let mut out = DenoisingLaplacian { lap, gain: 0.0 };
        out.set_gain(gain)?;
        Ok(out)
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.lap
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn set_gain(&mut self, gain: f64) -> Result<()> {
        if !(gain.is_finite() && gain >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "laplacian gain must be finite and nonnegative, got {gain}"
            )));
        }
        self.gain = gain;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.lap.rows()
    }

    /// Effective product `gain * (L v)`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.lap.matvec(v)?;
        for o in &mut out {
            *o *= self.gain;
        }
        Ok(out)
    }
}

/// Graph shift variation `‖x − Ax‖²`: how much a signal disagrees with its
/// shifted self under the operator A.
pub fn gsv_value<A: LinearOperator + ?Sized>(x: &[f64], shift_op: &A) -> Result<f64> {
    if shift_op.in_dim() != x.len() || shift_op.out_dim() != x.len() {
        return Err(Error::dims("gsv shift operator", x.len(), shift_op.in_dim()));
    }
    let ax = shift_op.apply(x)?;
    Ok(x.iter().zip(&ax).map(|(a, b)| (a - b) * (a - b)).sum())
}

/// Missing pixels within the window around (r, c), nearest first.
///
/// Ordered by squared Euclidean distance with row-major tie-breaking, so
/// selection is deterministic. `skip` excludes the center when it is
/// itself a missing pixel.
fn nearest_missing(
    part: &PixelPartition,
    r: usize,
    c: usize,
    params: &EdgeParams,
    skip: Option<usize>,
) -> Vec<usize> {
    let rad = params.window_radius as isize;
    let (ri, ci) = (r as isize, c as isize);
    let mut found: Vec<(usize, usize, usize, usize)> = Vec::new();
    for dr in -rad..=rad {
        for dc in -rad..=rad {
            let (rr, cc) = (ri + dr, ci + dc);
            if rr < 0 || cc < 0 || rr as usize >= part.height() || cc as usize >= part.width() {
                continue;
            }
            let (rr, cc) = (rr as usize, cc as usize);
            if let Some(j) = part.n_pos(rr, cc) {
                if skip == Some(j) {
                    continue;
                }
                let d2 = (dr * dr + dc * dc) as usize;
                found.push((d2, rr, cc, j));
            }
        }
    }
    found.sort_unstable();
    found
        .into_iter()
        .take(params.max_neighbors)
        .map(|(_, _, _, j)| j)
        .collect()
}

/// Builds the signed M x N perturbation: each observed pixel links to its
/// nearest missing pixels, weighted by the signed affinity of their
/// features.
pub fn build_directed_perturbation(
    features_obs: &FeatureSet,
    features_mis: &FeatureSet,
    metric: &MetricMatrix,
    params: &EdgeParams,
    part: &PixelPartition,
) -> Result<DirectedPerturbation> {
    params.validate()?;
    if features_obs.len() != part.m_len() {
        return Err(Error::dims(
            "observed feature set",
            part.m_len(),
            features_obs.len(),
        ));
    }
    if features_mis.len() != part.n_len() {
        return Err(Error::dims(
            "missing feature set",
            part.n_len(),
            features_mis.len(),
        ));
    }
    let mut triplets = Vec::new();
    for (i, &(r, c)) in part.m_index().iter().enumerate() {
        for j in nearest_missing(part, r, c, params, None) {
            let d = feature_distance(features_obs.feature(i), features_mis.feature(j), metric)?;
            triplets.push((i, j, signed_weight(d, params)));
        }
    }
    let p = CsrMatrix::from_triplets(part.m_len(), part.n_len(), &triplets)?;
    Ok(DirectedPerturbation { p, gain: 0.0 })
}

/// Builds the positive Laplacian over missing pixels.
///
/// Neighborhoods use the same nearest-within-window rule and are
/// symmetrized mutually: an edge survives only if each endpoint selected
/// the other. Edge weights are `exp(-affinity)`, always positive, so
/// L = D − W is PSD with exact symmetry and zero row sums.
pub fn build_denoising_laplacian(
    features_mis: &FeatureSet,
    metric_r: &MetricMatrix,
    params: &EdgeParams,
    part: &PixelPartition,
) -> Result<DenoisingLaplacian> {
    params.validate()?;
    let n = part.n_len();
    if features_mis.len() != n {
        return Err(Error::dims("missing feature set", n, features_mis.len()));
    }
    let selected: Vec<Vec<usize>> = part
        .n_index()
        .iter()
        .enumerate()
        .map(|(u, &(r, c))| nearest_missing(part, r, c, params, Some(u)))
        .collect();
    let mut degree = vec![0.0f64; n];
    let mut triplets = Vec::new();
    for u in 0..n {
        for &v in &selected[u] {
            if v <= u || !selected[v].contains(&u) {
                continue;
            }
            let d = feature_distance(features_mis.feature(u), features_mis.feature(v), metric_r)?;
            let w = unsigned_weight(d);
            triplets.push((u, v, -w));
            triplets.push((v, u, -w));
            degree[u] += w;
            degree[v] += w;
        }
    }
    for (u, &deg) in degree.iter().enumerate() {
        if deg > 0.0 {
            triplets.push((u, u, deg));
        }
    }
    let lap = CsrMatrix::from_triplets(n, n, &triplets)?;
    Ok(DenoisingLaplacian { lap, gain: 0.0 })
}
