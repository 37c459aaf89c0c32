use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within each row; every stored
/// value is finite. Zero entries may be stored explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets. Triplets may arrive in any
    /// order; duplicate (row, col) pairs are rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidConstruction(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidConstruction(format!(
                    "non-finite value at ({r}, {c})"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidConstruction(format!(
                    "duplicate entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut row_offsets = vec![0usize; rows + 1];
        for &(r, _, _) in &sorted {
            row_offsets[r + 1] += 1;
        }
        for r in 0..rows {
            row_offsets[r + 1] += row_offsets[r];
        }
        let col_indices = sorted.iter().map(|&(_, c, _)| c).collect();
        let values = sorted.iter().map(|&(_, _, v)| v).collect();
        Ok(CsrMatrix {
            rows,
            cols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            rows: n,
            cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// (column, value) pairs stored for row `r`, columns ascending.
    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_offsets[r];
        let hi = self.row_offsets[r + 1];
        self.col_indices[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::dims("csr matvec", self.cols, v.len()));
        }
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let lo = self.row_offsets[r];
            let hi = self.row_offsets[r + 1];
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.values[k] * v[self.col_indices[k]];
            }
            out[r] = acc;
        }
        Ok(out)
    }

    pub fn matvec_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::dims("csr transpose matvec", self.rows, v.len()));
        }
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let vr = v[r];
            if vr == 0.0 {
                continue;
            }
            let lo = self.row_offsets[r];
            let hi = self.row_offsets[r + 1];
            for k in lo..hi {
                out[self.col_indices[k]] += self.values[k] * vr;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let row_offsets = counts.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut cursor = counts;
        for r in 0..self.rows {
            let lo = self.row_offsets[r];
            let hi = self.row_offsets[r + 1];
            for k in lo..hi {
                let c = self.col_indices[k];
                let slot = cursor[c];
                cursor[c] += 1;
                col_indices[slot] = r;
                values[slot] = self.values[k];
            }
        }
        CsrMatrix {
            rows: self.cols,
            cols: self.rows,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row_entries(r) {
                out.set(r, c, v);
            }
        }
        out
    }

    /// Checks structural invariants; useful after hand-assembly in tests.
    pub fn validate(&self) -> Result<()> {
        if self.row_offsets.len() != self.rows + 1 {
            return Err(Error::InvalidConstruction(format!(
                "row_offsets length {} for {} rows",
                self.row_offsets.len(),
                self.rows
            )));
        }
        if self.row_offsets[0] != 0 || *self.row_offsets.last().unwrap() != self.values.len() {
            return Err(Error::InvalidConstruction(
                "row_offsets endpoints inconsistent with value count".into(),
            ));
        }
        for r in 0..self.rows {
            if self.row_offsets[r] > self.row_offsets[r + 1] {
                return Err(Error::InvalidConstruction(format!(
                    "row_offsets decrease at row {r}"
                )));
            }
            let lo = self.row_offsets[r];
            let hi = self.row_offsets[r + 1];
            for k in lo..hi {
                if self.col_indices[k] >= self.cols {
                    return Err(Error::InvalidConstruction(format!(
                        "column index {} out of range in row {r}",
                        self.col_indices[k]
                    )));
                }
                if k > lo && self.col_indices[k] <= self.col_indices[k - 1] {
                    return Err(Error::InvalidConstruction(format!(
                        "columns not strictly increasing in row {r}"
                    )));
                }
                if !self.values[k].is_finite() {
                    return Err(Error::InvalidConstruction(format!(
                        "non-finite value in row {r}"
                    )));
                }
            }
        }
        Ok(())
    }
}
