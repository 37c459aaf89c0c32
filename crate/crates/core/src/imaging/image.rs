use crate::error::{Error, Result};

/// Single-channel image, row-major, luminance values in [0, 1].
///
/// Construction clamps into range, so downstream numeric code never sees
/// out-of-range pixels; non-finite input is rejected outright.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, mut pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidConstruction(format!(
                "empty image {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::dims("image pixels", width * height, pixels.len()));
        }
        for p in &mut pixels {
            if !p.is_finite() {
                return Err(Error::InvalidConstruction(
                    "non-finite pixel value".into(),
                ));
            }
            *p = p.clamp(0.0, 1.0);
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds from a function of (row, col).
    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.width + c]
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    /// Copies the `pw x ph` window whose top-left corner is (r0, c0).
    pub fn crop(&self, r0: usize, c0: usize, pw: usize, ph: usize) -> Result<GrayImage> {
        if r0 + ph > self.height || c0 + pw > self.width {
            return Err(Error::InvalidConstruction(format!(
                "crop {pw}x{ph} at ({r0}, {c0}) exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut pixels = Vec::with_capacity(pw * ph);
        for r in r0..r0 + ph {
            pixels.extend_from_slice(&self.pixels[r * self.width + c0..r * self.width + c0 + pw]);
        }
        GrayImage::new(pw, ph, pixels)
    }
}
