//! Synthetic sensor images with exact ground truth.
//!
//! Renders the printed marker grid, deforms it with an analytic displacement
//! field, optionally passes it through the fisheye camera model and additive
//! noise, and computes the strain the pipeline should recover — all without
//! touching the image-processing path, so the output doubles as an oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bspline::BSplineSurface;
use crate::error::{Error, Result};
use crate::geometry::ControlGrid;
use crate::imaging::{CameraModel, ColorImage};
use crate::strain::shear_strain;
use crate::types::{Point2, Point3};

pub const DEFAULT_QUAD_COLOR: [u8; 3] = [238, 214, 64];
pub const DEFAULT_BG_COLOR: [u8; 3] = [146, 36, 32];

/// Layout of the printed marker pattern: `rows × cols` axis-aligned quads
/// of `cell` pixels separated by `gap` pixels inside a `margin` border.
/// Cell, gap, and margin are per-axis so the pattern can match a camera's
/// aspect ratio. Image size is derived, never stored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub cell_x: usize,
    pub cell_y: usize,
    pub gap_x: usize,
    pub gap_y: usize,
    pub margin_x: usize,
    pub margin_y: usize,
    pub quad_color: [u8; 3],
    pub bg_color: [u8; 3],
}

impl Default for GridSpec {
    /// Reference sensor layout: 10×10 quads filling a 640×480 frame.
    fn default() -> Self {
        Self {
            rows: 10,
            cols: 10,
            cell_x: 36,
            cell_y: 27,
            gap_x: 10,
            gap_y: 20,
            margin_x: 95,
            margin_y: 15,
            quad_color: DEFAULT_QUAD_COLOR,
            bg_color: DEFAULT_BG_COLOR,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidDimensions("grid needs at least one quad per axis".into()));
        }
        if self.gap_x == 0 || self.gap_y == 0 || self.cell_x <= self.gap_x || self.cell_y <= self.gap_y
        {
            return Err(Error::InvalidParameter(
                "cells must be larger than gaps and gaps at least one pixel".into(),
            ));
        }
        if self.quad_color == self.bg_color {
            return Err(Error::InvalidParameter(
                "quad and background colors must differ".into(),
            ));
        }
        Ok(())
    }

    /// Center-to-center quad spacing.
    pub fn pitch_x(&self) -> usize {
        self.cell_x + self.gap_x
    }

    pub fn pitch_y(&self) -> usize {
        self.cell_y + self.gap_y
    }

    pub fn image_width(&self) -> usize {
        2 * self.margin_x + self.cols * self.cell_x + (self.cols - 1) * self.gap_x
    }

    pub fn image_height(&self) -> usize {
        2 * self.margin_y + self.rows * self.cell_y + (self.rows - 1) * self.gap_y
    }

    /// Top-left pixel of quad (r, c).
    pub fn quad_origin(&self, r: usize, c: usize) -> (usize, usize) {
        (self.margin_x + c * self.pitch_x(), self.margin_y + r * self.pitch_y())
    }

    /// The control-point lattice extraction should recover: one point per
    /// horizontally adjacent quad pair, horizontally centered in the gap at
    /// the quads' top edge (corner linking resolves ties toward the top
    /// corner pair). `rows × (cols − 1)` points.
    pub fn control_lattice(&self) -> Result<ControlGrid> {
        self.validate()?;
        if self.cols < 2 {
            return Err(Error::GridDegenerate(
                "control lattice needs at least two quad columns".into(),
            ));
        }
        let mut points = Vec::with_capacity(self.rows * (self.cols - 1));
        for r in 0..self.rows {
            let y = (self.margin_y + r * self.pitch_y()) as f64;
            for c in 0..self.cols - 1 {
                let x = (self.margin_x + c * self.pitch_x() + self.cell_x) as f64
                    + self.gap_x as f64 / 2.0;
                points.push(Point2::new(x, y));
            }
        }
        ControlGrid::from_complete(self.rows, self.cols - 1, points)
    }
}

/// Renders the marker pattern at exact integer positions. Deterministic.
pub fn render_grid(spec: &GridSpec) -> Result<ColorImage> {
    spec.validate()?;
    let mut img = ColorImage::filled(spec.image_width(), spec.image_height(), spec.bg_color);
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            let (x0, y0) = spec.quad_origin(r, c);
            for y in y0..y0 + spec.cell_y {
                for x in x0..x0 + spec.cell_x {
                    img.set(x, y, spec.quad_color);
                }
            }
        }
    }
    Ok(img)
}

/// Analytic surface displacement applied to the rendered pattern.
///
/// Point and edge contacts share the radial profile
/// `u(r) = A · (r/ε) · exp(1/2 − r²/(2ε²))`: zero at the contact, peak `A`
/// at distance `ε`, decaying outward — the annulus a blurred point load
/// imprints on the tangential surface motion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisplacementField {
    None,
    Uniform { dx: f64, dy: f64 },
    Point { center: Point2, amplitude: f64, epsilon: f64 },
    Edge { point: Point2, angle: f64, amplitude: f64, epsilon: f64 },
}

fn annulus(r: f64, amplitude: f64, epsilon: f64) -> f64 {
    amplitude * (r / epsilon) * (0.5 - r * r / (2.0 * epsilon * epsilon)).exp()
}

impl DisplacementField {
    pub fn validate(&self) -> Result<()> {
        let check = |amplitude: f64, epsilon: f64| {
            if !(amplitude >= 0.0 && amplitude.is_finite()) {
                return Err(Error::InvalidParameter("amplitude must be nonnegative".into()));
            }
            if !(epsilon > 0.0 && epsilon.is_finite()) {
                return Err(Error::InvalidParameter("epsilon must be positive".into()));
            }
            Ok(())
        };
        match *self {
            Self::None => Ok(()),
            Self::Uniform { dx, dy } => {
                if dx.is_finite() && dy.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("uniform shift must be finite".into()))
                }
            }
            Self::Point { amplitude, epsilon, .. } => check(amplitude, epsilon),
            Self::Edge { amplitude, epsilon, .. } => check(amplitude, epsilon),
        }
    }

    /// Displacement vector at pixel (x, y).
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        match *self {
            Self::None => (0.0, 0.0),
            Self::Uniform { dx, dy } => (dx, dy),
            Self::Point { center, amplitude, epsilon } => {
                let (dx, dy) = (x - center.x, y - center.y);
                let r = (dx * dx + dy * dy).sqrt();
                if r < 1e-12 {
                    return (0.0, 0.0);
                }
                let u = annulus(r, amplitude, epsilon);
                (u * dx / r, u * dy / r)
            }
            Self::Edge { point, angle, amplitude, epsilon } => {
                let theta = angle.to_radians();
                // Unit normal of the line through `point` at `angle`.
                let (nx, ny) = (-theta.sin(), theta.cos());
                let d = (x - point.x) * nx + (y - point.y) * ny;
                let u = annulus(d.abs(), amplitude, epsilon) * d.signum();
                (u * nx, u * ny)
            }
        }
    }
}

/// Backward warp with bilinear sampling: `output(x) = input(x − f(x))`, so
/// pattern features move by approximately `+f`. Samples falling outside the
/// input take `bg`.
pub fn warp_image(img: &ColorImage, field: &DisplacementField, bg: [u8; 3]) -> ColorImage {
    let mut out = ColorImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let (dx, dy) = field.eval(x as f64, y as f64);
            let rgb = img
                .sample_bilinear(x as f64 - dx, y as f64 - dy)
                .unwrap_or(bg);
            out.set(x, y, rgb);
        }
    }
    out
}

/// Forward fisheye distortion — the exact inverse of `undistort_fisheye`:
/// each distorted pixel samples the pinhole image at its undistorted
/// location (Newton-inverted angle polynomial). Outside samples take `bg`.
pub fn apply_fisheye(img: &ColorImage, cam: &CameraModel, bg: [u8; 3]) -> Result<ColorImage> {
    cam.validate()?;
    let mut out = ColorImage::new(img.width(), img.height());
    for v in 0..img.height() {
        for u in 0..img.width() {
            let (xn, yn) = cam.pixel_to_norm(u as f64, v as f64);
            let (xu, yu) = cam.undistort_norm(xn, yn);
            let (sx, sy) = cam.norm_to_pixel(xu, yu);
            out.set(u, v, img.sample_bilinear(sx, sy).unwrap_or(bg));
        }
    }
    Ok(out)
}

/// Additive pixel noise, reproducible from the seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSpec {
    /// Standard deviation in intensity levels; zero disables noise.
    pub gaussian_sigma: f64,
    pub seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { gaussian_sigma: 0.0, seed: 0 }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if self.gaussian_sigma >= 0.0 && self.gaussian_sigma.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter("noise sigma must be nonnegative".into()))
        }
    }
}

/// Adds channel-wise Gaussian noise, clamped to 0–255.
pub fn apply_noise(img: &ColorImage, spec: &NoiseSpec) -> Result<ColorImage> {
    spec.validate()?;
    if spec.gaussian_sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::new(0.0, spec.gaussian_sigma)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut out = img.clone();
    for v in out.data_mut() {
        *v = (*v as f64 + normal.sample(&mut rng)).round().clamp(0.0, 255.0) as u8;
    }
    Ok(out)
}

/// Strain the pipeline should measure for `field`, computed analytically:
/// the reference surface comes from `grid`, the target from the same points
/// displaced by the field, both degree-1, sampled on the same lattice. No
/// image processing is involved.
pub fn ground_truth_strain(
    field: &DisplacementField,
    grid: &ControlGrid,
    alpha: f64,
    k_u: usize,
    k_v: usize,
) -> Result<f64> {
    field.validate()?;
    let reference = BSplineSurface::from_grid(grid, 1, 1)?;
    let mut displaced = Vec::with_capacity(grid.rows() * grid.cols());
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            let p = grid.point(r, c);
            let (dx, dy) = field.eval(p.x, p.y);
            displaced.push(Point3::new(p.x + dx, p.y + dy, 0.0));
        }
    }
    let target = BSplineSurface::from_points(grid.rows(), grid.cols(), displaced, 1, 1)?;
    let s_ref = reference.sample(k_u, k_v)?;
    let s = target.sample(k_u, k_v)?;
    Ok(shear_strain(&s, &s_ref, alpha)?.gamma_ss)
}

/// Everything needed to score a pipeline run against this sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSample {
    pub grid: GridSpec,
    pub field: DisplacementField,
    pub camera: Option<CameraModel>,
    pub noise: NoiseSpec,
    pub alpha: f64,
    pub k_u: usize,
    pub k_v: usize,
    /// Ground-truth strain for (field, grid, alpha, k_u, k_v).
    pub gamma_ss: f64,
}

/// Renders a reference/deformed image pair plus its sidecar. The reference
/// frame uses `noise.seed`, the deformed frame `noise.seed + 1`, so the two
/// noise realizations differ but the whole sample reruns byte-identically.
pub fn generate_sample(
    spec: &GridSpec,
    field: &DisplacementField,
    camera: Option<&CameraModel>,
    noise: &NoiseSpec,
    alpha: f64,
    k_u: usize,
    k_v: usize,
) -> Result<(ColorImage, ColorImage, SynthSample)> {
    field.validate()?;
    let base = render_grid(spec)?;
    let mut reference = base.clone();
    let mut deformed = warp_image(&base, field, spec.bg_color);
    if let Some(cam) = camera {
        reference = apply_fisheye(&reference, cam, spec.bg_color)?;
        deformed = apply_fisheye(&deformed, cam, spec.bg_color)?;
    }
    reference = apply_noise(&reference, noise)?;
    deformed = apply_noise(
        &deformed,
        &NoiseSpec { seed: noise.seed.wrapping_add(1), ..*noise },
    )?;
    let gamma_ss = ground_truth_strain(field, &spec.control_lattice()?, alpha, k_u, k_v)?;
    let sidecar = SynthSample {
        grid: *spec,
        field: *field,
        camera: camera.copied(),
        noise: *noise,
        alpha,
        k_u,
        k_v,
        gamma_ss,
    };
    Ok((reference, deformed, sidecar))
}
