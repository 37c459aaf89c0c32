use crate::error::{Error, Result};
use crate::graphmodel::PixelPartition;
use crate::imaging::GrayImage;

/// Number of hand-crafted feature channels.
pub const FEATURE_DIM: usize = 8;

/// Which half of the partition a feature set describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelSet {
    Observed,
    Missing,
}

/// Per-pixel feature vectors for one half of a partition, row-major in the
/// canonical index order of that half.
#[derive(Debug, Clone)]
pub struct FeatureSet {
    k_dim: usize,
    rows: Vec<f64>,
    count: usize,
}

impl FeatureSet {
    pub fn from_rows(k_dim: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let count = rows.len();
        let mut flat = Vec::with_capacity(count * k_dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != k_dim {
                return Err(Error::dims("feature row", k_dim, row.len()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidConstruction(format!(
                    "non-finite feature in row {i}"
                )));
            }
            flat.extend(row);
        }
        Ok(FeatureSet {
            k_dim,
            rows: flat,
            count,
        })
    }

    pub fn k_dim(&self) -> usize {
        self.k_dim
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn feature(&self, i: usize) -> &[f64] {
        &self.rows[i * self.k_dim..(i + 1) * self.k_dim]
    }
}

/// Computes the 8 feature channels for the requested pixel set.
///
/// Channels, in order: intensity, 3x3 mean, horizontal gradient, vertical
/// gradient, 3x3 variance, 4-neighbor Laplacian response, row coordinate,
/// column coordinate. Raw channels are computed over the whole patch and
/// each is affinely rescaled to [-1, 1] using whole-patch extrema, so
/// observed and missing features live on one common scale; a channel that
/// is constant over the patch maps to all zeros.
///
/// `baseline_img` is expected to be the fully interpolated patch, giving
/// missing pixels meaningful local statistics.
pub fn extract_features(
    baseline_img: &GrayImage,
    part: &PixelPartition,
    which: PixelSet,
) -> Result<FeatureSet> {
    let (w, h) = (baseline_img.width(), baseline_img.height());
    if w != part.width() || h != part.height() {
        return Err(Error::dims("feature image size", part.width() * part.height(), w * h));
    }
    let channels = raw_channels(baseline_img);
    let normalized: Vec<Vec<f64>> = channels.iter().map(|ch| rescale(ch)).collect();
    let coords = match which {
        PixelSet::Observed => part.m_index(),
        PixelSet::Missing => part.n_index(),
    };
    let mut rows = Vec::with_capacity(coords.len() * FEATURE_DIM);
    for &(r, c) in coords {
        let flat = r * w + c;
        for ch in &normalized {
            rows.push(ch[flat]);
        }
    }
    Ok(FeatureSet {
        k_dim: FEATURE_DIM,
        rows,
        count: coords.len(),
    })
}

fn raw_channels(img: &GrayImage) -> [Vec<f64>; FEATURE_DIM] {
    let (w, h) = (img.width(), img.height());
    let count = w * h;
    let mut intensity = vec![0.0; count];
    let mut mean3 = vec![0.0; count];
    let mut grad_h = vec![0.0; count];
    let mut grad_v = vec![0.0; count];
    let mut var3 = vec![0.0; count];
    let mut lap = vec![0.0; count];
    let mut row_co = vec![0.0; count];
    let mut col_co = vec![0.0; count];

    for r in 0..h {
        for c in 0..w {
            let at = r * w + c;
            let v = img.get(r, c);
            intensity[at] = v;
            row_co[at] = r as f64;
            col_co[at] = c as f64;

            // 3x3 statistics over whichever neighbors exist.
            let mut sum = 0.0;
            let mut sum2 = 0.0;
            let mut n = 0.0;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (rr, cc) = (r as isize + dr, c as isize + dc);
                    if rr < 0 || cc < 0 || rr as usize >= h || cc as usize >= w {
                        continue;
                    }
                    let u = img.get(rr as usize, cc as usize);
                    sum += u;
                    sum2 += u * u;
                    n += 1.0;
                }
            }
            let m = sum / n;
            mean3[at] = m;
            var3[at] = (sum2 / n - m * m).max(0.0);

            // Central differences, one-sided at the borders.
            let left = if c > 0 { img.get(r, c - 1) } else { v };
            let right = if c + 1 < w { img.get(r, c + 1) } else { v };
            let denom_h = if c > 0 && c + 1 < w { 2.0 } else { 1.0 };
            grad_h[at] = (right - left) / denom_h;
            let up = if r > 0 { img.get(r - 1, c) } else { v };
            let down = if r + 1 < h { img.get(r + 1, c) } else { v };
            let denom_v = if r > 0 && r + 1 < h { 2.0 } else { 1.0 };
            grad_v[at] = (down - up) / denom_v;

            // Discrete Laplacian over existing 4-neighbors.
            let mut acc = 0.0;
            let mut deg = 0.0;
            for (rr, cc) in [
                (r as isize - 1, c as isize),
                (r as isize + 1, c as isize),
                (r as isize, c as isize - 1),
                (r as isize, c as isize + 1),
            ] {
                if rr < 0 || cc < 0 || rr as usize >= h || cc as usize >= w {
                    continue;
                }
                acc += img.get(rr as usize, cc as usize);
                deg += 1.0;
            }
            lap[at] = acc - deg * v;
        }
    }

    [intensity, mean3, grad_h, grad_v, var3, lap, row_co, col_co]
}

/// Affine rescale to [-1, 1] by patch extrema. Channels whose span is
/// negligible (constant up to roundoff, e.g. border-mean wobble on a flat
/// patch) map to all zeros instead of amplifying noise.
fn rescale(ch: &[f64]) -> Vec<f64> {
    let lo = ch.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ch.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span <= 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
        return vec![0.0; ch.len()];
    }
    ch.iter()
        .map(|&v| (2.0 * (v - lo) / span - 1.0).clamp(-1.0, 1.0))
        .collect()
}
