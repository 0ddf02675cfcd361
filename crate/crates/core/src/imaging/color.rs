//! Color conversions and HSV windowing.

use super::{BinaryImage, ColorImage, GrayImage};

/// Rec.601 luma: round(0.299 R + 0.587 G + 0.114 B).
pub fn to_grayscale(img: &ColorImage) -> GrayImage {
    let mut out = GrayImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let [r, g, b] = img.get(x, y);
            let luma = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
            out.set(x, y, luma.round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}

/// RGB to (hue in degrees [0, 360), saturation [0, 1], value [0, 1]).
/// Hue is 0 for achromatic pixels.
pub fn rgb_to_hsv(rgb: [u8; 3]) -> (f64, f64, f64) {
    let r = rgb[0] as f64 / 255.0;
    let g = rgb[1] as f64 / 255.0;
    let b = rgb[2] as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    let h = if delta <= 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let h = if h < 0.0 { h + 360.0 } else { h };
    (h, s, v)
}

/// Foreground where hue lies in [hue_lo, hue_hi] and saturation/value reach
/// their minima. Requires 0 <= hue_lo < hue_hi <= 360.
pub fn hsv_mask(
    img: &ColorImage,
    hue_lo: f64,
    hue_hi: f64,
    sat_min: f64,
    val_min: f64,
) -> BinaryImage {
    assert!(
        (0.0..360.0).contains(&hue_lo) && hue_lo < hue_hi && hue_hi <= 360.0,
        "hue window must satisfy 0 <= lo < hi <= 360"
    );
    let mut out = BinaryImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let (h, s, v) = rgb_to_hsv(img.get(x, y));
            out.set(x, y, h >= hue_lo && h <= hue_hi && s >= sat_min && v >= val_min);
        }
    }
    out
}
