//! Raw and central moments of binary masks, and the derived orientation.

use super::BinaryImage;
use crate::error::{Error, Result};

/// Raw moments up to second order plus the derived central moments.
/// Foreground pixels weigh 1, background 0.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub m00: f64,
    pub m10: f64,
    pub m01: f64,
    pub m20: f64,
    pub m02: f64,
    pub m11: f64,
    pub mu20: f64,
    pub mu02: f64,
    pub mu11: f64,
}

impl Moments {
    /// Centroid (m10/m00, m01/m00); `None` for an empty mask.
    pub fn centroid(&self) -> Option<(f64, f64)> {
        if self.m00 > 0.0 {
            Some((self.m10 / self.m00, self.m01 / self.m00))
        } else {
            None
        }
    }
}

/// Principal-axis direction of a mask.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orientation {
    /// Angle of the major axis in degrees, in [0, 180).
    pub degrees: f64,
    /// True when the second moments are isotropic and the angle is arbitrary.
    pub degenerate: bool,
}

/// Moments of a binary mask.
pub fn image_moments(img: &BinaryImage) -> Moments {
    let mut m = Moments::default();
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !img.get(x, y) {
                continue;
            }
            let (xf, yf) = (x as f64, y as f64);
            m.m00 += 1.0;
            m.m10 += xf;
            m.m01 += yf;
            m.m20 += xf * xf;
            m.m02 += yf * yf;
            m.m11 += xf * yf;
        }
    }
    if m.m00 > 0.0 {
        m.mu20 = m.m20 - m.m10 * m.m10 / m.m00;
        m.mu02 = m.m02 - m.m01 * m.m01 / m.m00;
        m.mu11 = m.m11 - m.m10 * m.m01 / m.m00;
    }
    m
}

/// Major-axis angle theta = atan2(2 mu11, mu20 - mu02) / 2, folded into
/// [0, 180) degrees. Errors on an empty mask; isotropic masks set the
/// degenerate flag instead of failing.
pub fn orientation_from_moments(m: &Moments) -> Result<Orientation> {
    if m.m00 <= 0.0 {
        return Err(Error::UndefinedOrientation);
    }
    let degenerate = m.mu11.abs() < 1e-9 && (m.mu20 - m.mu02).abs() < 1e-9;
    let theta = 0.5 * (2.0 * m.mu11).atan2(m.mu20 - m.mu02);
    let mut degrees = theta.to_degrees();
    if degrees < 0.0 {
        degrees += 180.0;
    }
    if degrees >= 180.0 {
        degrees -= 180.0;
    }
    Ok(Orientation { degrees, degenerate })
}
