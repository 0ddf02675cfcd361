//! Image-to-strain processing for camera-based tactile sensing.
//!
//! The crate turns raw sensor images into quantitative shear-strain
//! measurements. A dyed elastomer pad carries a printed marker grid; a
//! fisheye camera watches it deform. The stages are:
//!
//! 1. [`imaging`]: undistortion, contrast equalization, edge-preserving
//!    smoothing, edge detection, thresholding, morphology, components.
//! 2. [`geometry`]: contour tracing, polygon simplification, quadrilateral
//!    filtering, corner midpoints, control-grid assembly.
//! 3. [`bspline`]: tensor-product B-spline surfaces over the control grid.
//! 4. [`strain`]: sampled-surface distance metric, force calibration,
//!    contact localization, and edge-orientation estimation.
//! 5. [`synth`]: a synthetic image generator that renders marker grids,
//!    warps them with analytic displacement fields, and reports exact
//!    ground-truth strain for end-to-end verification without hardware.
//!
//! [`pipeline`] wires the stages together behind a single [`PipelineConfig`].

pub mod bspline;
pub mod config;
pub mod error;
pub mod geometry;
pub mod imaging;
pub mod pipeline;
pub mod strain;
pub mod synth;
pub mod types;

pub use bspline::{BSplineSurface, SampledSurface};
pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use geometry::{ControlGrid, Quadrilateral, Segment};
pub use imaging::{BinaryImage, CameraModel, ColorImage, GrayImage};
pub use strain::{
    CalibrationModel, ContactEstimate, DistanceField, EdgeEstimate, ForceEstimate, StrainReport,
};
pub use synth::{DisplacementField, GridSpec, NoiseSpec, SynthSample};
pub use types::{Point2, Point3};
