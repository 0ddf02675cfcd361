//! Shear strain and downstream estimates from pairs of sampled surfaces.
//!
//! The central quantity is gamma_ss = alpha · Σ_i ‖s_i − s_i_ref‖₂ over
//! the K sampled surface points. On top of it sit force conversion via a
//! linear calibration, contact localization from the per-point distance
//! field, and edge-orientation estimation by PCA over the most displaced
//! lattice points.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bspline::SampledSurface;
use crate::error::{Error, Result};
use crate::imaging::{
    connected_components, dilate, largest_component, threshold, BinaryImage, ColorImage,
    GrayImage,
};
use crate::types::{Point2, Point3};

/// Default strain scale: calibrated so that the working deformation range
/// maps into a convenient dimensionless interval.
pub const DEFAULT_ALPHA: f64 = 1.0 / 18000.0;

/// Fraction of lattice points (the most displaced ones) entering the
/// edge-orientation PCA by default.
pub const DEFAULT_TOP_FRACTION: f64 = 0.1;

/// Straight-line distance between two 3D points.
pub fn point_distance(a: Point3, b: Point3) -> f64 {
    a.distance(&b)
}

fn check_comparable(s: &SampledSurface, s_ref: &SampledSurface) -> Result<()> {
    if !s.same_lattice(s_ref) {
        return Err(Error::MismatchedSurfaces(format!(
            "{}×{} vs {}×{}",
            s.k_u(),
            s.k_v(),
            s_ref.k_u(),
            s_ref.k_v()
        )));
    }
    Ok(())
}

fn per_point_distances(s: &SampledSurface, s_ref: &SampledSurface) -> Vec<f64> {
    s.points()
        .iter()
        .zip(s_ref.points())
        .map(|(a, b)| a.distance(b))
        .collect()
}

/// Sum of distances between corresponding sampled points.
pub fn total_distance(s: &SampledSurface, s_ref: &SampledSurface) -> Result<f64> {
    check_comparable(s, s_ref)?;
    Ok(per_point_distances(s, s_ref).iter().sum())
}

/// Shear strain measurement with its per-point breakdown.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrainReport {
    /// Dimensionless shear strain, alpha × total_distance.
    pub gamma_ss: f64,
    /// Distance per lattice point, pixels, in sampling order.
    pub per_point: Vec<f64>,
    /// Sum of per-point distances, pixels.
    pub total_distance: f64,
    /// Scale applied to the total.
    pub alpha: f64,
}

/// Computes gamma_ss = alpha · Σ ‖s_i − s_ref_i‖ between two surfaces
/// sampled on the same lattice. Symmetric in its surface arguments.
pub fn shear_strain(
    s: &SampledSurface,
    s_ref: &SampledSurface,
    alpha: f64,
) -> Result<StrainReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter("alpha must be positive".into()));
    }
    check_comparable(s, s_ref)?;
    let per_point = per_point_distances(s, s_ref);
    let total_distance: f64 = per_point.iter().sum();
    Ok(StrainReport { gamma_ss: alpha * total_distance, per_point, total_distance, alpha })
}

/// Per-lattice-point distances arranged as a K_u × K_v field (row-major,
/// u outer), aligned with the sampling lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceField {
    k_u: usize,
    k_v: usize,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn new(k_u: usize, k_v: usize, values: Vec<f64>) -> Result<Self> {
        if k_u == 0 || k_v == 0 || values.len() != k_u * k_v {
            return Err(Error::InvalidParameter(format!(
                "expected {}×{} = {} field values, got {}",
                k_u,
                k_v,
                k_u * k_v,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(
                "field values must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { k_u, k_v, values })
    }

    pub fn k_u(&self) -> usize {
        self.k_u
    }

    pub fn k_v(&self) -> usize {
        self.k_v
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        assert!(a < self.k_u && b < self.k_v, "field index out of range");
        self.values[a * self.k_v + b]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Linear 8-bit rasterization: the field maximum maps to 255. A zero
    /// field rasterizes to black.
    pub fn to_gray(&self) -> GrayImage {
        let mut img = GrayImage::new(self.k_v, self.k_u);
        let max = self.max();
        if max > 0.0 {
            for a in 0..self.k_u {
                for b in 0..self.k_v {
                    img.set(b, a, (self.get(a, b) / max * 255.0).round() as u8);
                }
            }
        }
        img
    }

    /// False-color rendering for visual inspection (dark blue → white).
    pub fn to_false_color(&self) -> ColorImage {
        const STOPS: [(f64, [f64; 3]); 4] = [
            (0.0, [8.0, 8.0, 64.0]),
            (0.35, [24.0, 120.0, 240.0]),
            (0.7, [255.0, 160.0, 24.0]),
            (1.0, [255.0, 255.0, 255.0]),
        ];
        let max = self.max();
        let mut img = ColorImage::new(self.k_v, self.k_u);
        for a in 0..self.k_u {
            for b in 0..self.k_v {
                let t = if max > 0.0 { self.get(a, b) / max } else { 0.0 };
                let (lo, hi) = match STOPS.iter().position(|(s, _)| t <= *s) {
                    Some(0) | None => (STOPS[0], STOPS[STOPS.len() - 1]),
                    Some(i) => (STOPS[i - 1], STOPS[i]),
                };
                let span = (hi.0 - lo.0).max(1e-12);
                let w = (t - lo.0) / span;
                let mut rgb = [0u8; 3];
                for (c, channel) in rgb.iter_mut().enumerate() {
                    *channel = (lo.1[c] + (hi.1[c] - lo.1[c]) * w).round() as u8;
                }
                img.set(b, a, rgb);
            }
        }
        img
    }

    /// Writes `row,col,value` lines in row-major order.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "row,col,value")?;
        for a in 0..self.k_u {
            for b in 0..self.k_v {
                writeln!(w, "{},{},{}", a, b, self.get(a, b))?;
            }
        }
        Ok(())
    }
}

/// Distance of every corresponding sample pair, on the sampling lattice.
pub fn displacement_map(s: &SampledSurface, s_ref: &SampledSurface) -> Result<DistanceField> {
    check_comparable(s, s_ref)?;
    DistanceField::new(s.k_u(), s.k_v(), per_point_distances(s, s_ref))
}

/// Mask of the dominant deformed region: cells above `threshold_px` (field
/// units) survive an 8-bit rasterized threshold, a single 3×3 dilation
/// bridges single-cell gaps, and only the largest connected component is
/// kept. `None` when nothing clears the threshold.
pub fn segment_contact(field: &DistanceField, threshold_px: f64) -> Result<Option<BinaryImage>> {
    if !(threshold_px > 0.0) {
        return Err(Error::InvalidParameter("threshold must be positive".into()));
    }
    let max = field.max();
    if max <= 0.0 {
        return Ok(None);
    }
    let t8 = (threshold_px / max * 255.0).round();
    if t8 >= 255.0 {
        return Ok(None);
    }
    let mask = threshold(&field.to_gray(), t8 as u8);
    let mask = dilate(&mask, 3);
    Ok(largest_component(&connected_components(&mask)))
}

/// Estimated contact location in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactEstimate {
    pub center: Point2,
    /// Fraction of the total field mass inside the contact region.
    pub confidence: f64,
}

/// Locates the contact as the distance-weighted centroid of the segmented
/// region, mapped to pixels through the reference surface positions.
pub fn localize_contact(
    field: &DistanceField,
    positions: &SampledSurface,
    threshold_px: f64,
) -> Result<ContactEstimate> {
    if field.k_u() != positions.k_u() || field.k_v() != positions.k_v() {
        return Err(Error::MismatchedSurfaces(format!(
            "field {}×{} vs positions {}×{}",
            field.k_u(),
            field.k_v(),
            positions.k_u(),
            positions.k_v()
        )));
    }
    let region = segment_contact(field, threshold_px)?.ok_or(Error::NoContact)?;
    let mut mass = 0.0;
    let (mut cx, mut cy) = (0.0, 0.0);
    for a in 0..field.k_u() {
        for b in 0..field.k_v() {
            if !region.get(b, a) {
                continue;
            }
            let w = field.get(a, b);
            let p = positions.point(a, b);
            mass += w;
            cx += w * p.x;
            cy += w * p.y;
        }
    }
    if mass <= 0.0 {
        return Err(Error::NoContact);
    }
    Ok(ContactEstimate {
        center: Point2::new(cx / mass, cy / mass),
        confidence: mass / field.sum(),
    })
}

/// Edge orientation extracted from the deformation field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeEstimate {
    /// Degrees in [0, 180), measured from the +x axis toward +y.
    pub angle: f64,
    /// λ_max / λ_min of the position covariance; ≥ 1.
    pub eigenvalue_ratio: f64,
    /// Set when the covariance is isotropic and the angle is arbitrary.
    pub degenerate: bool,
}

/// PCA orientation of the `top_fraction` most displaced lattice points,
/// using lattice indices as coordinates (column → x, row → y).
pub fn edge_orientation_pca(field: &DistanceField, top_fraction: f64) -> Result<EdgeEstimate> {
    let mut points = Vec::with_capacity(field.k_u() * field.k_v());
    for a in 0..field.k_u() {
        for b in 0..field.k_v() {
            points.push(Point2::new(b as f64, a as f64));
        }
    }
    edge_orientation_from_points(&points, field.values(), top_fraction)
}

/// PCA orientation of the points carrying the top fraction of `values`.
///
/// Selection is by value (descending, ties by input order); the unweighted
/// 2×2 covariance of the selected positions gives the principal direction.
pub fn edge_orientation_from_points(
    points: &[Point2],
    values: &[f64],
    top_fraction: f64,
) -> Result<EdgeEstimate> {
    if points.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    if !(top_fraction > 0.0 && top_fraction <= 1.0) {
        return Err(Error::InvalidParameter("top_fraction must be in (0, 1]".into()));
    }
    let m = (points.len() as f64 * top_fraction).floor() as usize;
    if m < 2 {
        return Err(Error::NotEnoughPoints { needed: 2, got: m });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .expect("finite field values")
            .then(a.cmp(&b))
    });
    let selected: Vec<Point2> = order[..m].iter().map(|&i| points[i]).collect();

    let n = m as f64;
    let mean_x = selected.iter().map(|p| p.x).sum::<f64>() / n;
    let mean_y = selected.iter().map(|p| p.y).sum::<f64>() / n;
    let (mut cxx, mut cyy, mut cxy) = (0.0, 0.0, 0.0);
    for p in &selected {
        let dx = p.x - mean_x;
        let dy = p.y - mean_y;
        cxx += dx * dx;
        cyy += dy * dy;
        cxy += dx * dy;
    }
    cxx /= n;
    cyy /= n;
    cxy /= n;

    let mut angle = 0.5 * (2.0 * cxy).atan2(cxx - cyy).to_degrees();
    angle = ((angle % 180.0) + 180.0) % 180.0;
    let mid = (cxx + cyy) / 2.0;
    let radius = (((cxx - cyy) / 2.0).powi(2) + cxy * cxy).sqrt();
    let lambda_max = mid + radius;
    let lambda_min = (mid - radius).max(0.0);
    let ratio = (lambda_max / lambda_min.max(1e-12)).max(1.0);
    Ok(EdgeEstimate { angle, eigenvalue_ratio: ratio, degenerate: ratio <= 1.0 + 1e-9 })
}

/// Linear strain→force model with its usable force range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationModel {
    /// Newtons per unit strain.
    pub slope: f64,
    /// Newtons.
    pub intercept: f64,
    /// Forces outside this range (N) are flagged, not clamped.
    pub valid_range: [f64; 2],
}

impl CalibrationModel {
    pub fn new(slope: f64, intercept: f64, valid_range: [f64; 2]) -> Result<Self> {
        if !(slope > 0.0) {
            return Err(Error::InvalidParameter("calibration slope must be positive".into()));
        }
        if !(valid_range[0] < valid_range[1]) {
            return Err(Error::InvalidParameter("calibration range must be increasing".into()));
        }
        Ok(Self { slope, intercept, valid_range })
    }
}

impl Default for CalibrationModel {
    /// Bench calibration of the reference sensor build.
    fn default() -> Self {
        Self { slope: 3.09, intercept: -1.14, valid_range: [1.0, 8.0] }
    }
}

/// Force corresponding to a strain value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceEstimate {
    /// Newtons.
    pub force: f64,
    /// True when the force falls inside the calibration's valid range.
    pub in_range: bool,
}

/// Converts strain to force through the linear model. Out-of-range results
/// are flagged rather than rejected.
pub fn force_from_strain(gamma: f64, cal: &CalibrationModel) -> Result<ForceEstimate> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter("strain must be nonnegative".into()));
    }
    let force = cal.slope * gamma + cal.intercept;
    let in_range = force >= cal.valid_range[0] && force <= cal.valid_range[1];
    Ok(ForceEstimate { force, in_range })
}

/// A fitted calibration plus its fit quality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFit {
    pub model: CalibrationModel,
    /// Root-mean-square force residual over the input samples, N.
    pub residual_rms: f64,
}

/// Ordinary least-squares line through (gamma, force) samples.
pub fn fit_calibration(samples: &[(f64, f64)]) -> Result<CalibrationFit> {
    if samples.len() < 2 {
        return Err(Error::NotEnoughPoints { needed: 2, got: samples.len() });
    }
    let n = samples.len() as f64;
    let mean_g = samples.iter().map(|(g, _)| g).sum::<f64>() / n;
    let mean_f = samples.iter().map(|(_, f)| f).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|(g, _)| (g - mean_g).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all strain values identical".into()));
    }
    let sxy: f64 = samples.iter().map(|(g, f)| (g - mean_g) * (f - mean_f)).sum();
    let slope = sxy / sxx;
    let intercept = mean_f - slope * mean_g;
    if !(slope > 0.0) {
        return Err(Error::DegenerateFit(format!(
            "fitted slope {slope} is not positive; force should grow with strain"
        )));
    }
    let ss_res: f64 = samples
        .iter()
        .map(|(g, f)| (f - (slope * g + intercept)).powi(2))
        .sum();
    let model = CalibrationModel { slope, intercept, ..CalibrationModel::default() };
    Ok(CalibrationFit { model, residual_rms: (ss_res / n).sqrt() })
}
