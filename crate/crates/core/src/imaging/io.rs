//! Image file I/O. PNG, PGM, and PPM are routed through the `image` crate;
//! the format follows the file extension.

use super::{BinaryImage, ColorImage, GrayImage};
use crate::error::Result;
use std::path::Path;

pub fn load_color(path: impl AsRef<Path>) -> Result<ColorImage> {
    let img = image::open(path)?.to_rgb8();
    ColorImage::from_raw(img.width() as usize, img.height() as usize, img.into_raw())
}

pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let img = image::open(path)?.to_luma8();
    GrayImage::from_raw(img.width() as usize, img.height() as usize, img.into_raw())
}

pub fn save_color(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    let buf = image::RgbImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
        .expect("dimensions match buffer");
    buf.save(path)?;
    Ok(())
}

pub fn save_gray(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, img.data().to_vec())
        .expect("dimensions match buffer");
    buf.save(path)?;
    Ok(())
}

/// Foreground saved as 255 on black.
pub fn save_binary(img: &BinaryImage, path: &Path) -> Result<()> {
    save_gray(&img.to_gray(), path)
}
