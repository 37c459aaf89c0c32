use crate::error::{Error, Result};
use crate::graphmodel::PixelPartition;
use crate::linalg::CsrMatrix;

const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    BilinearQuincunx,
    CustomLoaded,
}

/// Fixed N x M averaging interpolator producing missing pixels from
/// observed ones. Every row is a convex combination: weights sum to 1.
#[derive(Debug, Clone)]
pub struct BaseInterpolator {
    theta: CsrMatrix,
    kind: ThetaKind,
}

impl BaseInterpolator {
    fn checked(theta: CsrMatrix, kind: ThetaKind) -> Result<Self> {
        for r in 0..theta.rows() {
            let sum: f64 = theta.row_entries(r).map(|(_, v)| v).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidConstruction(format!(
                    "interpolator row {r} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(BaseInterpolator { theta, kind })
    }

    pub fn theta(&self) -> &CsrMatrix {
        &self.theta
    }

    pub fn kind(&self) -> ThetaKind {
        self.kind
    }

    /// N, the number of interpolated pixels.
    pub fn rows(&self) -> usize {
        self.theta.rows()
    }

    /// M, the number of observed pixels.
    pub fn cols(&self) -> usize {
        self.theta.cols()
    }

    /// Applies the interpolator: missing pixels from observed values.
    pub fn interpolate(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.theta.matvec(y)
    }
}

/// Builds the 4-neighbor averaging interpolator for a partition.
///
/// Each missing pixel averages its observed up/down/left/right neighbors
/// with equal weights; pixels near the border renormalize over the
/// neighbors that exist. A missing pixel with no observed 4-neighbor has
/// no defensible stencil and is rejected.
pub fn build_bilinear_theta(part: &PixelPartition) -> Result<BaseInterpolator> {
    let mut triplets = Vec::with_capacity(part.n_len() * 4);
    for (u, &(r, c)) in part.n_index().iter().enumerate() {
        let mut cols = Vec::with_capacity(4);
        let mut push = |rr: isize, cc: isize| {
            if rr >= 0 && cc >= 0 && (rr as usize) < part.height() && (cc as usize) < part.width() {
                if let Some(m) = part.m_pos(rr as usize, cc as usize) {
                    cols.push(m);
                }
            }
        };
        let (ri, ci) = (r as isize, c as isize);
        push(ri - 1, ci);
        push(ri + 1, ci);
        push(ri, ci - 1);
        push(ri, ci + 1);
        if cols.is_empty() {
            return Err(Error::InvalidConstruction(format!(
                "missing pixel ({r}, {c}) has no observed 4-neighbor"
            )));
        }
        let w = 1.0 / cols.len() as f64;
        for m in cols {
            triplets.push((u, m, w));
        }
    }
    let theta = CsrMatrix::from_triplets(part.n_len(), part.m_len(), &triplets)?;
    BaseInterpolator::checked(theta, ThetaKind::BilinearQuincunx)
}

/// Parses the plain-text interpolator format:
///
/// ```text
/// THETA <N> <M>
/// <row> <col> <value>
/// ...
/// ```
///
/// Blank lines and `#` comment lines are allowed. Row sums must be 1.
pub fn load_custom_theta(text: &str) -> Result<BaseInterpolator> {
    let mut offset = 0usize;
    let mut header: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for line in text.split_inclusive('\n') {
        let line_offset = offset;
        offset += line.len();
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 3 || fields[0] != "THETA" {
                    return Err(Error::Parse {
                        offset: line_offset,
                        message: "expected header `THETA <N> <M>`".into(),
                    });
                }
                let n = parse_field(fields[1], line_offset, "N")?;
                let m = parse_field(fields[2], line_offset, "M")?;
                header = Some((n, m));
            }
            Some(_) => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        offset: line_offset,
                        message: format!("expected `row col value`, got {} fields", fields.len()),
                    });
                }
                let r: usize = parse_field(fields[0], line_offset, "row")?;
                let c: usize = parse_field(fields[1], line_offset, "col")?;
                let v: f64 = fields[2].parse().map_err(|_| Error::Parse {
                    offset: line_offset,
                    message: format!("bad value `{}`", fields[2]),
                })?;
                triplets.push((r, c, v));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        offset: 0,
        message: "missing `THETA <N> <M>` header".into(),
    })?;
    let theta = CsrMatrix::from_triplets(n, m, &triplets)?;
    BaseInterpolator::checked(theta, ThetaKind::CustomLoaded)
}

fn parse_field(s: &str, offset: usize, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        offset,
        message: format!("bad {what} `{s}`"),
    })
}
