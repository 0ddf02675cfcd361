//! Fisheye camera model and image undistortion.
//!
//! The model warps the incidence angle with an even polynomial:
//! theta_d = theta (1 + k1 theta^2 + k2 theta^4 + k3 theta^6 + k4 theta^8),
//! where theta = atan(r) for a pinhole point at normalized radius r, and the
//! distorted image is the pinhole projection of the warped angle. With all
//! coefficients zero the mapping is the identity.

use super::ColorImage;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Intrinsics: focal lengths and principal point in pixels, plus four
/// radial distortion coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    #[serde(default)]
    pub k1: f64,
    #[serde(default)]
    pub k2: f64,
    #[serde(default)]
    pub k3: f64,
    #[serde(default)]
    pub k4: f64,
}

impl CameraModel {
    pub fn validate(&self) -> Result<()> {
        if self.fx <= 0.0 || self.fy <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "focal lengths must be positive, got fx={}, fy={}",
                self.fx, self.fy
            )));
        }
        Ok(())
    }

    fn theta_distorted(&self, theta: f64) -> f64 {
        let t2 = theta * theta;
        theta * (1.0 + t2 * (self.k1 + t2 * (self.k2 + t2 * (self.k3 + t2 * self.k4))))
    }

    /// Forward map on normalized coordinates: pinhole point to its position
    /// in the distorted image plane.
    pub fn distort_norm(&self, x: f64, y: f64) -> (f64, f64) {
        let r = (x * x + y * y).sqrt();
        if r < 1e-12 {
            return (x, y);
        }
        let theta = r.atan();
        let rd = self.theta_distorted(theta).tan();
        let scale = rd / r;
        (x * scale, y * scale)
    }

    /// Inverse map: distorted normalized point back to the pinhole plane.
    /// Solves the angle polynomial by Newton iteration.
    pub fn undistort_norm(&self, x: f64, y: f64) -> (f64, f64) {
        let rd = (x * x + y * y).sqrt();
        if rd < 1e-12 {
            return (x, y);
        }
        let theta_d = rd.atan();
        let mut theta = theta_d;
        for _ in 0..20 {
            let t2 = theta * theta;
            let poly = 1.0 + t2 * (self.k1 + t2 * (self.k2 + t2 * (self.k3 + t2 * self.k4)));
            let deriv = 1.0
                + t2 * (3.0 * self.k1
                    + t2 * (5.0 * self.k2 + t2 * (7.0 * self.k3 + t2 * 9.0 * self.k4)));
            let err = theta * poly - theta_d;
            if err.abs() < 1e-12 {
                break;
            }
            theta -= err / deriv;
        }
        let r = theta.tan();
        let scale = r / rd;
        (x * scale, y * scale)
    }

    #[inline]
    pub fn pixel_to_norm(&self, u: f64, v: f64) -> (f64, f64) {
        ((u - self.cx) / self.fx, (v - self.cy) / self.fy)
    }

    #[inline]
    pub fn norm_to_pixel(&self, x: f64, y: f64) -> (f64, f64) {
        (x * self.fx + self.cx, y * self.fy + self.cy)
    }
}

/// Removes fisheye distortion. Each output pixel is bilinearly sampled from
/// the source at its forward-distorted location; pixels that land outside
/// the source stay black.
pub fn undistort_fisheye(img: &ColorImage, cam: &CameraModel) -> Result<ColorImage> {
    cam.validate()?;
    let mut out = ColorImage::new(img.width(), img.height());
    for v in 0..img.height() {
        for u in 0..img.width() {
            let (xn, yn) = cam.pixel_to_norm(u as f64, v as f64);
            let (xd, yd) = cam.distort_norm(xn, yn);
            let (sx, sy) = cam.norm_to_pixel(xd, yd);
            if let Some(rgb) = img.sample_bilinear(sx, sy) {
                out.set(u, v, rgb);
            }
        }
    }
    Ok(out)
}
