//! Pixel-level primitives: image containers, color conversion, filtering,
//! thresholding, morphology, connected components, and raster moments.
//!
//! All rasters are row-major with the origin in the top-left corner
//! (x right, y down). Filters replicate the border; morphology treats
//! out-of-bounds pixels as background.

mod color;
mod components;
mod filter;
mod fisheye;
pub mod io;
mod moments;
mod morph;

pub use color::{hsv_mask, rgb_to_hsv, to_grayscale};
pub use components::{connected_components, largest_component, LabelMap};
pub use filter::{bilateral_filter, clahe, sobel_magnitude, threshold};
pub use fisheye::{undistort_fisheye, CameraModel};
pub use moments::{image_moments, orientation_from_moments, Moments, Orientation};
pub use morph::{dilate, erode, morph_close};

use crate::error::{Error, Result};

/// 8-bit single-channel raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    /// Zero-filled image. Dimensions must be at least 1x1.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be at least 1x1");
        Self { width, height, data: vec![0; width * height] }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "{width}x{height} image needs {} bytes, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x] = v;
    }

    /// Border-replicating fetch for signed coordinates.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yc * self.width + xc]
    }
}

/// 8-bit RGB raster, interleaved channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ColorImage {
    /// Constant-color image. Dimensions must be at least 1x1.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be at least 1x1");
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Self { width, height, data }
    }

    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, [0, 0, 0])
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height}")));
        }
        if data.len() != width * height * 3 {
            return Err(Error::InvalidDimensions(format!(
                "{width}x{height} RGB image needs {} bytes, got {}",
                width * height * 3,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        debug_assert!(x < self.width && y < self.height);
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        debug_assert!(x < self.width && y < self.height);
        let i = (y * self.width + x) * 3;
        self.data[i] = rgb[0];
        self.data[i + 1] = rgb[1];
        self.data[i + 2] = rgb[2];
    }

    /// Bilinear sample at a fractional position; `None` outside the image.
    /// Positions within 1e-6 px of the border count as inside so that exact
    /// border hits survive floating-point noise.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<[u8; 3]> {
        if !x.is_finite() || !y.is_finite() {
            return None;
        }
        const EDGE_TOL: f64 = 1e-6;
        let xmax = (self.width - 1) as f64;
        let ymax = (self.height - 1) as f64;
        if x < -EDGE_TOL || y < -EDGE_TOL || x > xmax + EDGE_TOL || y > ymax + EDGE_TOL {
            return None;
        }
        let x = x.clamp(0.0, xmax);
        let y = y.clamp(0.0, ymax);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let mut out = [0u8; 3];
        for c in 0..3 {
            let p00 = self.get(x0, y0)[c] as f64;
            let p10 = self.get(x1, y0)[c] as f64;
            let p01 = self.get(x0, y1)[c] as f64;
            let p11 = self.get(x1, y1)[c] as f64;
            let top = p00 + (p10 - p00) * fx;
            let bot = p01 + (p11 - p01) * fx;
            let v = top + (bot - top) * fy;
            out[c] = v.round().clamp(0.0, 255.0) as u8;
        }
        Some(out)
    }

    /// Axis-aligned crop; the rectangle must lie inside the image.
    pub fn crop(&self, x: usize, y: usize, width: usize, height: usize) -> Result<ColorImage> {
        if width == 0 || height == 0 || x + width > self.width || y + height > self.height {
            return Err(Error::InvalidDimensions(format!(
                "crop {width}x{height}+{x}+{y} exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(width * height * 3);
        for row in y..y + height {
            let start = (row * self.width + x) * 3;
            data.extend_from_slice(&self.data[start..start + width * 3]);
        }
        Ok(ColorImage { width, height, data })
    }
}

/// Boolean mask; `true` is foreground.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be at least 1x1");
        Self { width, height, data: vec![false; width * height] }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions(format!("{width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::InvalidDimensions(format!(
                "{width}x{height} mask needs {} entries, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    /// Background for out-of-bounds coordinates.
    #[inline]
    pub fn get_or_background(&self, x: isize, y: isize) -> bool {
        if x < 0 || y < 0 || x >= self.width as isize || y >= self.height as isize {
            false
        } else {
            self.data[y as usize * self.width + x as usize]
        }
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x] = v;
    }

    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Foreground rendered as 255 on black.
    pub fn to_gray(&self) -> GrayImage {
        let data = self.data.iter().map(|&v| if v { 255 } else { 0 }).collect();
        GrayImage { width: self.width, height: self.height, data }
    }
}
