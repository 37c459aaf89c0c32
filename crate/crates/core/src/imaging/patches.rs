use crate::error::{Error, Result};
use crate::imaging::GrayImage;

/// Overlapped square patching with a separable raised-cosine fusion
/// window. The window is strictly positive at every pixel, so any covering
/// set of patches yields positive fused weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchGrid {
    patch_size: usize,
    stride: usize,
}

impl Default for PatchGrid {
    fn default() -> Self {
        PatchGrid {
            patch_size: 64,
            stride: 48,
        }
    }
}

impl PatchGrid {
    pub fn new(patch_size: usize, stride: usize) -> Result<Self> {
        if patch_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "patch size {patch_size} too small"
            )));
        }
        if stride == 0 || stride > patch_size {
            return Err(Error::InvalidParameter(format!(
                "stride {stride} must be in 1..={patch_size}"
            )));
        }
        Ok(PatchGrid { patch_size, stride })
    }

    pub fn patch_size(&self) -> usize {
        self.patch_size
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// One axis of the fusion window: 0.5 − 0.5·cos(2π(i+0.5)/P), in (0, 1].
    fn window_1d(&self) -> Vec<f64> {
        let p = self.patch_size as f64;
        (0..self.patch_size)
            .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * (i as f64 + 0.5) / p).cos())
            .collect()
    }
}

/// Top-left corners along one axis: steps of `stride`, with the last
/// position clamped flush to the far border so coverage is total.
fn axis_positions(extent: usize, patch: usize, stride: usize) -> Vec<usize> {
    let mut xs = Vec::new();
    let mut x = 0;
    loop {
        if x + patch >= extent {
            xs.push(extent - patch);
            break;
        }
        xs.push(x);
        x += stride;
    }
    xs.dedup();
    xs
}

/// Top-left corners (row, col) covering the canvas.
pub fn patch_positions(
    canvas_w: usize,
    canvas_h: usize,
    grid: &PatchGrid,
) -> Result<Vec<(usize, usize)>> {
    if canvas_w < grid.patch_size || canvas_h < grid.patch_size {
        return Err(Error::InvalidParameter(format!(
            "canvas {canvas_w}x{canvas_h} smaller than patch size {}",
            grid.patch_size
        )));
    }
    let rows = axis_positions(canvas_h, grid.patch_size, grid.stride);
    let cols = axis_positions(canvas_w, grid.patch_size, grid.stride);
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        for &c in &cols {
            out.push((r, c));
        }
    }
    Ok(out)
}

/// Cuts the canvas into overlapping patches; returns each patch with its
/// top-left corner.
pub fn extract_patches(
    img: &GrayImage,
    grid: &PatchGrid,
) -> Result<Vec<(GrayImage, (usize, usize))>> {
    let positions = patch_positions(img.width(), img.height(), grid)?;
    positions
        .into_iter()
        .map(|(r, c)| {
            img.crop(r, c, grid.patch_size, grid.patch_size)
                .map(|p| (p, (r, c)))
        })
        .collect()
}

/// Blends patches back onto a canvas: each output pixel is the
/// window-weighted average of every patch covering it.
pub fn fuse_patches(
    patches: &[GrayImage],
    positions: &[(usize, usize)],
    grid: &PatchGrid,
    canvas_w: usize,
    canvas_h: usize,
) -> Result<GrayImage> {
    if patches.len() != positions.len() {
        return Err(Error::dims("fuse patch list", positions.len(), patches.len()));
    }
    let p = grid.patch_size;
    let win = grid.window_1d();
    let mut acc = vec![0.0; canvas_w * canvas_h];
    let mut wsum = vec![0.0; canvas_w * canvas_h];
    for (patch, &(r0, c0)) in patches.iter().zip(positions) {
        if patch.width() != p || patch.height() != p {
            return Err(Error::dims("fuse patch size", p, patch.width()));
        }
        if r0 + p > canvas_h || c0 + p > canvas_w {
            return Err(Error::InvalidConstruction(format!(
                "patch at ({r0}, {c0}) exceeds canvas {canvas_w}x{canvas_h}"
            )));
        }
        for r in 0..p {
            let wr = win[r];
            for c in 0..p {
                let w = wr * win[c];
                let at = (r0 + r) * canvas_w + c0 + c;
                acc[at] += w * patch.get(r, c);
                wsum[at] += w;
            }
        }
    }
    for (i, &w) in wsum.iter().enumerate() {
        if w <= 0.0 {
            return Err(Error::InvalidConstruction(format!(
                "canvas pixel {i} not covered by any patch"
            )));
        }
        acc[i] /= w;
    }
    GrayImage::new(canvas_w, canvas_h, acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_flush_patch_is_identity() {
        let img = GrayImage::from_fn(8, 8, |r, c| ((r * 5 + c) % 9) as f64 / 8.0).unwrap();
        let grid = PatchGrid::new(8, 8).unwrap();
        let patches = extract_patches(&img, &grid).unwrap();
        assert_eq!(patches.len(), 1);
        let (ps, pos): (Vec<_>, Vec<_>) = patches.into_iter().unzip();
        let fused = fuse_patches(&ps, &pos, &grid, 8, 8).unwrap();
        for (a, b) in fused.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_patches_fuse_to_constant() {
        let grid = PatchGrid::new(4, 3).unwrap();
        let positions = patch_positions(10, 10, &grid).unwrap();
        let patches: Vec<GrayImage> = positions
            .iter()
            .map(|_| GrayImage::constant(4, 4, 0.42).unwrap())
            .collect();
        let fused = fuse_patches(&patches, &positions, &grid, 10, 10).unwrap();
        for &v in fused.pixels() {
            assert!((v - 0.42).abs() <= 1e-12);
        }
    }

    #[test]
    fn extract_then_fuse_reproduces_image() {
        let img = GrayImage::from_fn(20, 14, |r, c| ((r * 31 + c * 7) % 50) as f64 / 49.0).unwrap();
        let grid = PatchGrid::new(8, 5).unwrap();
        let patches = extract_patches(&img, &grid).unwrap();
        let (ps, pos): (Vec<_>, Vec<_>) = patches.into_iter().unzip();
        let fused = fuse_patches(&ps, &pos, &grid, 20, 14).unwrap();
        for (a, b) in fused.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn positions_are_flush_at_borders() {
        let grid = PatchGrid::new(64, 48).unwrap();
        let pos = patch_positions(100, 64, &grid).unwrap();
        // One row of patches, columns clamped to 0 and 36.
        assert_eq!(pos, vec![(0, 0), (0, 36)]);
        let grid2 = PatchGrid::new(64, 48).unwrap();
        let pos2 = patch_positions(112, 112, &grid2).unwrap();
        assert_eq!(pos2, vec![(0, 0), (0, 48), (48, 0), (48, 48)]);
    }

    #[test]
    fn window_strictly_positive() {
        let grid = PatchGrid::default();
        for w in grid.window_1d() {
            assert!(w > 0.0);
        }
    }

    #[test]
    fn undersized_canvas_rejected() {
        let grid = PatchGrid::default();
        assert!(patch_positions(63, 64, &grid).is_err());
    }

    #[test]
    fn out_of_canvas_position_rejected() {
        let grid = PatchGrid::new(4, 4).unwrap();
        let patch = GrayImage::constant(4, 4, 0.5).unwrap();
        let err = fuse_patches(&[patch], &[(5, 0)], &grid, 8, 8).unwrap_err();
        assert!(err.to_string().contains("exceeds canvas"), "{err}");
    }

    #[test]
    fn uncovered_pixel_rejected() {
        let grid = PatchGrid::new(4, 4).unwrap();
        let patch = GrayImage::constant(4, 4, 0.5).unwrap();
        // One patch on an 8x8 canvas covers only a quarter.
        assert!(fuse_patches(&[patch], &[(0, 0)], &grid, 8, 8).is_err());
    }
}
