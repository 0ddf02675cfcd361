//! Pipeline configuration: a single TOML document covering every tunable
//! stage, with all defaults embedded so a config file is optional.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DEFAULT_ROW_GAP_FACTOR;
use crate::imaging::CameraModel;
use crate::strain::{CalibrationModel, DEFAULT_ALPHA, DEFAULT_TOP_FRACTION};

/// Crop applied right after undistortion, in pixels of the full frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Roi {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

/// Intensity-domain preprocessing ahead of contour extraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub clahe_enabled: bool,
    pub clahe_tile: usize,
    pub clahe_clip: f64,
    pub bilateral_radius: usize,
    pub bilateral_sigma_space: f64,
    pub bilateral_sigma_range: f64,
    /// Sobel magnitude above this becomes edge foreground.
    pub edge_threshold: u8,
    pub close_kernel: usize,
    pub close_iterations: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            clahe_enabled: true,
            clahe_tile: 64,
            clahe_clip: 3.0,
            bilateral_radius: 2,
            bilateral_sigma_space: 2.0,
            bilateral_sigma_range: 30.0,
            edge_threshold: 60,
            close_kernel: 3,
            close_iterations: 1,
        }
    }
}

/// Quadrilateral candidate filtering and corner linking.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadConfig {
    pub min_area: f64,
    pub max_area: f64,
    pub min_solidity: f64,
    /// Polygon simplification tolerance as a fraction of contour perimeter.
    pub rdp_epsilon_factor: f64,
    /// Corners of neighboring quads farther apart than this never link.
    pub max_link_distance: f64,
    /// Row clustering threshold as a fraction of the median point spacing.
    pub row_gap_factor: f64,
    /// Fixes the grid column count instead of inferring it.
    pub expected_cols: Option<usize>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            min_area: 30.0,
            max_area: 2000.0,
            min_solidity: 0.85,
            rdp_epsilon_factor: 0.04,
            max_link_distance: 14.0,
            row_gap_factor: DEFAULT_ROW_GAP_FACTOR,
            expected_cols: None,
        }
    }
}

/// Surface fitting and sampling density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplineConfig {
    pub degree_u: usize,
    pub degree_v: usize,
    pub k_u: usize,
    pub k_v: usize,
}

impl Default for SplineConfig {
    fn default() -> Self {
        Self { degree_u: 1, degree_v: 1, k_u: 100, k_v: 100 }
    }
}

/// Every knob of the image→strain pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Lens model; leaving it out skips the undistortion step.
    pub camera: Option<CameraModel>,
    /// Leaving it out processes the full frame.
    pub roi: Option<Roi>,
    pub filters: FilterConfig,
    pub quads: QuadConfig,
    pub spline: SplineConfig,
    pub strain: StrainConfig,
    pub calibration: CalibrationModel,
}

/// Strain metric and its downstream estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrainConfig {
    pub alpha: f64,
    /// Distance-field level (px) separating contact from rest.
    pub contact_threshold: f64,
    /// Fraction of most-displaced lattice points entering edge PCA.
    pub pca_top_fraction: f64,
}

impl Default for StrainConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            contact_threshold: 1.0,
            pca_top_fraction: DEFAULT_TOP_FRACTION,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(cam) = &self.camera {
            cam.validate()?;
        }
        if let Some(roi) = &self.roi {
            if roi.width < 3 || roi.height < 3 {
                return Err(Error::Config("roi must be at least 3×3".into()));
            }
        }
        let f = &self.filters;
        if f.clahe_tile == 0 || f.clahe_clip < 1.0 {
            return Err(Error::Config("clahe needs tile ≥ 1 and clip ≥ 1".into()));
        }
        if f.bilateral_radius == 0
            || f.bilateral_sigma_space <= 0.0
            || f.bilateral_sigma_range <= 0.0
        {
            return Err(Error::Config("bilateral needs radius ≥ 1 and positive sigmas".into()));
        }
        if f.close_kernel < 3 || f.close_kernel % 2 == 0 || f.close_iterations == 0 {
            return Err(Error::Config(
                "closing needs an odd kernel ≥ 3 and at least one iteration".into(),
            ));
        }
        let q = &self.quads;
        if !(q.min_area > 0.0 && q.min_area < q.max_area) {
            return Err(Error::Config("quad area bounds must satisfy 0 < min < max".into()));
        }
        if !(q.min_solidity > 0.0 && q.min_solidity <= 1.0) {
            return Err(Error::Config("quad solidity bound must be in (0, 1]".into()));
        }
        if !(q.rdp_epsilon_factor > 0.0) || !(q.max_link_distance > 0.0) || !(q.row_gap_factor > 0.0)
        {
            return Err(Error::Config(
                "rdp factor, link distance, and row gap factor must be positive".into(),
            ));
        }
        if q.expected_cols == Some(0) {
            return Err(Error::Config("expected_cols must be at least 1 when set".into()));
        }
        let s = &self.spline;
        if s.degree_u == 0 || s.degree_v == 0 || s.k_u < 2 || s.k_v < 2 {
            return Err(Error::Config(
                "spline needs degrees ≥ 1 and at least 2 samples per axis".into(),
            ));
        }
        let st = &self.strain;
        if !(st.alpha > 0.0) || !(st.contact_threshold > 0.0) {
            return Err(Error::Config("alpha and contact threshold must be positive".into()));
        }
        if !(st.pca_top_fraction > 0.0 && st.pca_top_fraction <= 1.0) {
            return Err(Error::Config("pca_top_fraction must be in (0, 1]".into()));
        }
        let c = &self.calibration;
        CalibrationModel::new(c.slope, c.intercept, c.valid_range)
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }
}
