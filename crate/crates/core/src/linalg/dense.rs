use crate::error::{Error, Result};

/// Row-major dense matrix. All entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("dense matrix data", rows * cols, data.len()));
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidConstruction(format!(
                "non-finite entry at flat index {bad}"
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn scaled(&self, s: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Copies `block` into this matrix with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &DenseMatrix) -> Result<()> {
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::InvalidConstruction(format!(
                "block {}x{} at ({r0}, {c0}) exceeds {}x{}",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        for r in 0..block.rows {
            let src = &block.data[r * block.cols..(r + 1) * block.cols];
            let dst_start = (r0 + r) * self.cols + c0;
            self.data[dst_start..dst_start + block.cols].copy_from_slice(src);
        }
        Ok(())
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::dims("dense matvec", self.cols, v.len()));
        }
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            out[r] = self.row(r).iter().zip(v).map(|(a, x)| a * x).sum();
        }
        Ok(out)
    }

    pub fn matvec_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::dims("dense transpose matvec", self.rows, v.len()));
        }
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            let vr = v[r];
            for c in 0..self.cols {
                out[c] += row[c] * vr;
            }
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims("dense matmul", self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for c in 0..other.cols {
                    dst[c] += a * orow[c];
                }
            }
        }
        Ok(out)
    }

    pub fn lu_factor(&self) -> Result<LuFactors> {
        LuFactors::new(self)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::dims("matrix inverse", n, self.cols));
        }
        let lu = self.lu_factor()?;
        let mut out = Self::zeros(n, n);
        let mut e = vec![0.0; n];
        for c in 0..n {
            e[c] = 1.0;
            let col = lu.solve(&e)?;
            e[c] = 0.0;
            for r in 0..n {
                out.data[r * n + c] = col[r];
            }
        }
        Ok(out)
    }
}

/// LU factorization with partial (row) pivoting, P·A = L·U.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: Vec<f64>,
    perm: Vec<usize>,
    n: usize,
}

impl LuFactors {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let n = a.rows;
        if n != a.cols {
            return Err(Error::dims("lu factorization", n, a.cols));
        }
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Err(Error::SingularMatrix { pivot: 0 });
        }
        // Pivots below this are singular to working precision.
        let tiny = scale * f64::EPSILON;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_val = lu[k * n + k].abs();
            for r in k + 1..n {
                let v = lu[r * n + k].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val <= tiny {
                return Err(Error::SingularMatrix { pivot: k });
            }
            if pivot_row != k {
                perm.swap(k, pivot_row);
                for c in 0..n {
                    lu.swap(k * n + c, pivot_row * n + c);
                }
            }
            let pivot = lu[k * n + k];
            for r in k + 1..n {
                let factor = lu[r * n + k] / pivot;
                lu[r * n + k] = factor;
                for c in k + 1..n {
                    lu[r * n + c] -= factor * lu[k * n + c];
                }
            }
        }
        Ok(LuFactors { lu, perm, n })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::dims("lu solve", n, b.len()));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 1..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[r * n + c] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.lu[r * n + c] * x[c];
            }
            x[r] = s / self.lu[r * n + r];
        }
        Ok(x)
    }
}

/// Solves `a · x = b` by LU with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    a.lu_factor()?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;

    #[test]
    fn matvec_known_values() {
        let a = DenseMatrix::from_row_major(2, 2, vec![0.5, 0.5, 0.25, 0.75]).unwrap();
        let out = a.matvec(&[2.0, 4.0]).unwrap();
        assert_eq!(out, vec![3.0, 3.5]);
    }

    #[test]
    fn matvec_dimension_mismatch_names_dims() {
        let a = DenseMatrix::zeros(2, 3);
        let err = a.matvec(&[1.0, 2.0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("expected 3") && msg.contains("got 2"), "{msg}");
    }

    #[test]
    fn lu_solves_small_system() {
        let a = DenseMatrix::from_row_major(2, 2, vec![4.0, -2.0, -2.0, 4.0]).unwrap();
        let x = lu_solve(&a, &[2.0, 0.0]).unwrap();
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((x[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lu_residual_small_for_moderate_condition() {
        // Deterministic well-conditioned test matrix.
        let n = 24;
        let mut data = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                let v = ((r * 31 + c * 17 + 7) % 13) as f64 / 13.0 - 0.5;
                data[r * n + c] = v + if r == c { (n as f64) / 2.0 } else { 0.0 };
            }
        }
        let a = DenseMatrix::from_row_major(n, n, data).unwrap();
        let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = lu_solve(&a, &b).unwrap();
        let r: Vec<f64> = a
            .matvec(&x)
            .unwrap()
            .iter()
            .zip(&b)
            .map(|(ax, bi)| ax - bi)
            .collect();
        assert!(norm(&r) / norm(&b) <= 1e-10);
    }

    #[test]
    fn lu_reports_singular_pivot() {
        let a = DenseMatrix::from_row_major(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        match a.lu_factor() {
            Err(Error::SingularMatrix { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = DenseMatrix::from_row_major(3, 3, vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0])
            .unwrap();
        let inv = a.inverse().unwrap();
        let prod = a.matmul(&inv).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 1.0 } else { 0.0 };
                assert!((prod.get(r, c) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(DenseMatrix::from_row_major(1, 2, vec![1.0, f64::NAN]).is_err());
    }
}
