use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// PSD bilinear form on feature space, stored as a lower-triangular factor
/// F so the effective matrix F·Fᵀ is symmetric PSD by construction.
/// Diagonal entries of the factor are kept nonnegative as a canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    k_dim: usize,
    factor: Vec<f64>,
}

impl MetricMatrix {
    /// Identity form: plain inner product between features.
    pub fn identity(k_dim: usize) -> Self {
        let mut factor = vec![0.0; k_dim * k_dim];
        for i in 0..k_dim {
            factor[i * k_dim + i] = 1.0;
        }
        MetricMatrix { k_dim, factor }
    }

    /// Builds from an explicit row-major K x K factor. Entries above the
    /// diagonal must be zero and diagonal entries nonnegative.
    pub fn from_factor(k_dim: usize, factor: Vec<f64>) -> Result<Self> {
        if factor.len() != k_dim * k_dim {
            return Err(Error::dims("metric factor", k_dim * k_dim, factor.len()));
        }
        for r in 0..k_dim {
            for c in 0..k_dim {
                let v = factor[r * k_dim + c];
                if !v.is_finite() {
                    return Err(Error::InvalidConstruction(format!(
                        "non-finite factor entry at ({r}, {c})"
                    )));
                }
                if c > r && v != 0.0 {
                    return Err(Error::InvalidConstruction(format!(
                        "factor entry ({r}, {c}) above the diagonal is nonzero"
                    )));
                }
                if c == r && v < 0.0 {
                    return Err(Error::InvalidConstruction(format!(
                        "negative factor diagonal at {r}"
                    )));
                }
            }
        }
        Ok(MetricMatrix { k_dim, factor })
    }

    /// Diagonal form: factor = diag(sqrt(d)), effective matrix = diag(d).
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let k = diag.len();
        let mut factor = vec![0.0; k * k];
        for (i, &d) in diag.iter().enumerate() {
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::InvalidConstruction(format!(
                    "diagonal entry {i} must be finite and nonnegative, got {d}"
                )));
            }
            factor[i * k + i] = d.sqrt();
        }
        Ok(MetricMatrix { k_dim: k, factor })
    }

    pub fn k_dim(&self) -> usize {
        self.k_dim
    }

    pub fn factor(&self) -> &[f64] {
        &self.factor
    }

    pub fn factor_diag(&self, i: usize) -> f64 {
        self.factor[i * self.k_dim + i]
    }

    pub fn set_factor_diag(&mut self, i: usize, v: f64) -> Result<()> {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "factor diagonal must be finite and nonnegative, got {v}"
            )));
        }
        self.factor[i * self.k_dim + i] = v;
        Ok(())
    }

    /// The effective matrix F·Fᵀ, materialized.
    pub fn effective(&self) -> DenseMatrix {
        let k = self.k_dim;
        let f = DenseMatrix::from_row_major(k, k, self.factor.clone()).expect("validated factor");
        f.matmul(&f.transpose()).expect("square factor")
    }

    /// Fᵀv, the half-transform both arguments of the bilinear form pass
    /// through.
    fn half_transform(&self, v: &[f64]) -> Vec<f64> {
        let k = self.k_dim;
        let mut out = vec![0.0; k];
        for r in 0..k {
            let vr = v[r];
            if vr == 0.0 {
                continue;
            }
            // Row r of F contributes to output slots 0..=r (lower triangular).
            for c in 0..=r {
                out[c] += self.factor[r * self.k_dim + c] * vr;
            }
        }
        out
    }
}

/// Bilinear affinity f_jᵀ (F·Fᵀ) f_i between two feature vectors.
///
/// Computed as (Fᵀf_j)·(Fᵀf_i), which makes symmetry in (i, j) exact and
/// never materializes the effective matrix.
pub fn feature_distance(f_i: &[f64], f_j: &[f64], metric: &MetricMatrix) -> Result<f64> {
    if f_i.len() != metric.k_dim() {
        return Err(Error::dims("feature distance lhs", metric.k_dim(), f_i.len()));
    }
    if f_j.len() != metric.k_dim() {
        return Err(Error::dims("feature distance rhs", metric.k_dim(), f_j.len()));
    }
    let a = metric.half_transform(f_i);
    let b = metric.half_transform(f_j);
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}
