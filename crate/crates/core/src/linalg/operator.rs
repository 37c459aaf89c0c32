use crate::error::Result;
use crate::linalg::dense::DenseMatrix;
use crate::linalg::sparse::CsrMatrix;

/// A linear map exposed only through its action on vectors.
///
/// Iterative solvers accept this trait so composite systems never have to
/// be assembled as explicit matrices.
pub trait LinearOperator {
    /// Output dimension (length of `apply` results).
    fn out_dim(&self) -> usize;

    /// Input dimension (length `apply` expects).
    fn in_dim(&self) -> usize;

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>>;

    fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>>;
}

impl LinearOperator for DenseMatrix {
    fn out_dim(&self) -> usize {
        self.rows()
    }

    fn in_dim(&self) -> usize {
        self.cols()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.matvec(v)
    }

    fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.matvec_transpose(v)
    }
}

impl LinearOperator for CsrMatrix {
    fn out_dim(&self) -> usize {
        self.rows()
    }

    fn in_dim(&self) -> usize {
        self.cols()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.matvec(v)
    }

    fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.matvec_transpose(v)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn out_dim(&self) -> usize {
        (**self).out_dim()
    }

    fn in_dim(&self) -> usize {
        (**self).in_dim()
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(v)
    }

    fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        (**self).apply_transpose(v)
    }
}
