use crate::error::{Error, Result};

/// Split of a pixel grid into observed (M) and missing (N) sets.
///
/// Both index lists are row-major ordered, so vectors indexed by them have
/// a canonical layout. `slot` maps a flat pixel index to its position
/// within whichever list owns it.
#[derive(Debug, Clone)]
pub struct PixelPartition {
    width: usize,
    height: usize,
    mask: Vec<bool>,
    m_index: Vec<(usize, usize)>,
    n_index: Vec<(usize, usize)>,
    slot: Vec<usize>,
}

impl PixelPartition {
    /// Builds a partition from an explicit mask (`true` = observed),
    /// row-major, length `width * height`.
    pub fn from_mask(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "empty grid {width}x{height}"
            )));
        }
        if mask.len() != width * height {
            return Err(Error::dims("partition mask", width * height, mask.len()));
        }
        let mut m_index = Vec::new();
        let mut n_index = Vec::new();
        let mut slot = vec![0usize; width * height];
        for r in 0..height {
            for c in 0..width {
                let flat = r * width + c;
                if mask[flat] {
                    slot[flat] = m_index.len();
                    m_index.push((r, c));
                } else {
                    slot[flat] = n_index.len();
                    n_index.push((r, c));
                }
            }
        }
        Ok(PixelPartition {
            width,
            height,
            mask,
            m_index,
            n_index,
            slot,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of observed pixels.
    pub fn m_len(&self) -> usize {
        self.m_index.len()
    }

    /// Number of missing pixels.
    pub fn n_len(&self) -> usize {
        self.n_index.len()
    }

    pub fn m_index(&self) -> &[(usize, usize)] {
        &self.m_index
    }

    pub fn n_index(&self) -> &[(usize, usize)] {
        &self.n_index
    }

    pub fn is_observed(&self, r: usize, c: usize) -> bool {
        self.mask[r * self.width + c]
    }

    /// Position of an observed pixel within the M ordering.
    pub fn m_pos(&self, r: usize, c: usize) -> Option<usize> {
        let flat = r * self.width + c;
        self.mask[flat].then(|| self.slot[flat])
    }

    /// Position of a missing pixel within the N ordering.
    pub fn n_pos(&self, r: usize, c: usize) -> Option<usize> {
        let flat = r * self.width + c;
        (!self.mask[flat]).then(|| self.slot[flat])
    }

    /// Pulls the observed pixels out of a row-major image, M-ordered.
    pub fn gather_observed(&self, pixels: &[f64]) -> Result<Vec<f64>> {
        if pixels.len() != self.width * self.height {
            return Err(Error::dims(
                "gather observed",
                self.width * self.height,
                pixels.len(),
            ));
        }
        Ok(self
            .m_index
            .iter()
            .map(|&(r, c)| pixels[r * self.width + c])
            .collect())
    }

    /// Pulls the missing pixels out of a row-major image, N-ordered.
    pub fn gather_missing(&self, pixels: &[f64]) -> Result<Vec<f64>> {
        if pixels.len() != self.width * self.height {
            return Err(Error::dims(
                "gather missing",
                self.width * self.height,
                pixels.len(),
            ));
        }
        Ok(self
            .n_index
            .iter()
            .map(|&(r, c)| pixels[r * self.width + c])
            .collect())
    }

    /// Reassembles a full row-major image from the two ordered halves.
    pub fn scatter(&self, observed: &[f64], missing: &[f64]) -> Result<Vec<f64>> {
        if observed.len() != self.m_len() {
            return Err(Error::dims("scatter observed", self.m_len(), observed.len()));
        }
        if missing.len() != self.n_len() {
            return Err(Error::dims("scatter missing", self.n_len(), missing.len()));
        }
        let mut out = vec![0.0; self.width * self.height];
        for (v, &(r, c)) in observed.iter().zip(&self.m_index) {
            out[r * self.width + c] = *v;
        }
        for (v, &(r, c)) in missing.iter().zip(&self.n_index) {
            out[r * self.width + c] = *v;
        }
        Ok(out)
    }
}

/// Quincunx split: pixel (r, c) is observed iff r + c is even.
///
/// On even-sized grids this removes exactly half the pixels and M = N.
pub fn checkerboard_partition(width: usize, height: usize) -> Result<PixelPartition> {
    if width < 2 || height < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid {width}x{height} too small to partition, need at least 2x2"
        )));
    }
    let mask = (0..height)
        .flat_map(|r| (0..width).map(move |c| (r + c) % 2 == 0))
        .collect();
    PixelPartition::from_mask(width, height, mask)
}
