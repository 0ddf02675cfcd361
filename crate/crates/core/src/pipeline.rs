//! End-to-end orchestration: camera frame → control grid → surface pair →
//! strain, force, contact, and edge estimates.
//!
//! All extracted coordinates are reported in undistorted full-frame pixels;
//! the ROI crop only limits where features are searched for.

use serde::{Deserialize, Serialize};

use crate::bspline::BSplineSurface;
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::geometry::{
    approx_polygon, connect_corners, filter_quadrilaterals, find_contours, midpoints,
    sort_into_grid, ControlGrid, Quadrilateral,
};
use crate::imaging::{
    bilateral_filter, clahe, morph_close, sobel_magnitude, threshold, to_grayscale,
    undistort_fisheye, BinaryImage, ColorImage,
};
use crate::strain::{
    displacement_map, edge_orientation_pca, force_from_strain, localize_contact, shear_strain,
    ContactEstimate, DistanceField, EdgeEstimate, ForceEstimate, StrainReport,
};
use crate::types::Point2;

/// Everything a single frame yields, plus the frame itself for overlays.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub grid: ControlGrid,
    pub quads: Vec<Quadrilateral>,
    pub midpoints: Vec<Point2>,
    /// Undistorted full frame the coordinates refer to.
    pub undistorted: ColorImage,
}

/// Undistorts, crops, and reduces a frame to its marker-edge mask.
/// Returns the undistorted full frame alongside the mask and the crop
/// offset that maps mask pixels back into the frame.
fn preprocess(
    img: &ColorImage,
    config: &PipelineConfig,
) -> Result<(ColorImage, BinaryImage, (usize, usize))> {
    let undistorted = match &config.camera {
        Some(cam) => undistort_fisheye(img, cam)?,
        None => img.clone(),
    };
    let (cropped, offset) = match &config.roi {
        Some(roi) => (undistorted.crop(roi.x, roi.y, roi.width, roi.height)?, (roi.x, roi.y)),
        None => (undistorted.clone(), (0, 0)),
    };
    let f = &config.filters;
    let mut gray = to_grayscale(&cropped);
    if f.clahe_enabled {
        gray = clahe(&gray, f.clahe_tile, f.clahe_clip);
    }
    gray = bilateral_filter(&gray, f.bilateral_radius, f.bilateral_sigma_space, f.bilateral_sigma_range);
    let edges = sobel_magnitude(&gray)?;
    let mask = morph_close(&threshold(&edges, f.edge_threshold), f.close_kernel, f.close_iterations);
    Ok((undistorted, mask, offset))
}

/// Recovers the control-point grid from one frame: marker contours →
/// quadrilaterals → linked-corner midpoints → ordered grid.
pub fn extract_grid(img: &ColorImage, config: &PipelineConfig) -> Result<Extraction> {
    config.validate()?;
    let (undistorted, mask, offset) = preprocess(img, config)?;
    let q = &config.quads;
    let polys: Vec<Vec<Point2>> = find_contours(&mask)
        .iter()
        .filter(|c| c.len() >= 4)
        .map(|c| approx_polygon(c, (q.rdp_epsilon_factor * c.perimeter()).max(1e-9)))
        .collect();
    let mut quads = filter_quadrilaterals(&polys, q.min_area, q.max_area, q.min_solidity);
    if quads.is_empty() {
        return Err(Error::NoQuadrilaterals);
    }
    let (ox, oy) = (offset.0 as f64, offset.1 as f64);
    for quad in &mut quads {
        for corner in &mut quad.corners {
            corner.x += ox;
            corner.y += oy;
        }
    }
    let mids = midpoints(&connect_corners(&quads, q.max_link_distance));
    let grid = sort_into_grid(&mids, q.expected_cols, q.row_gap_factor)?;
    Ok(Extraction { grid, quads, midpoints: mids, undistorted })
}

/// Full measurement derived from a reference/deformed grid pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairAnalysis {
    pub strain: StrainReport,
    pub force: ForceEstimate,
    /// Absent when nothing clears the contact threshold.
    pub contact: Option<ContactEstimate>,
    /// Computed only when a contact region exists.
    pub edge: Option<EdgeEstimate>,
    pub field: DistanceField,
}

/// Fits B-spline surfaces to both grids, samples them on the configured
/// lattice, and derives every downstream estimate.
pub fn analyze_pair(
    reference: &ControlGrid,
    target: &ControlGrid,
    config: &PipelineConfig,
) -> Result<PairAnalysis> {
    config.validate()?;
    if reference.rows() != target.rows() || reference.cols() != target.cols() {
        return Err(Error::MismatchedGrids(format!(
            "reference {}×{} vs target {}×{}",
            reference.rows(),
            reference.cols(),
            target.rows(),
            target.cols()
        )));
    }
    let mut reference = reference.clone();
    let mut target = target.clone();
    if !reference.all_valid() {
        reference.fill_invalid()?;
    }
    if !target.all_valid() {
        target.fill_invalid()?;
    }
    let s = &config.spline;
    let ref_surface = BSplineSurface::from_grid(&reference, s.degree_u, s.degree_v)?;
    let tgt_surface = BSplineSurface::from_grid(&target, s.degree_u, s.degree_v)?;
    let s_ref = ref_surface.sample(s.k_u, s.k_v)?;
    let s_tgt = tgt_surface.sample(s.k_u, s.k_v)?;

    let st = &config.strain;
    let strain = shear_strain(&s_tgt, &s_ref, st.alpha)?;
    let field = displacement_map(&s_tgt, &s_ref)?;
    let force = force_from_strain(strain.gamma_ss, &config.calibration)?;
    let contact = match localize_contact(&field, &s_ref, st.contact_threshold) {
        Ok(c) => Some(c),
        Err(Error::NoContact) => None,
        Err(e) => return Err(e),
    };
    let edge = match &contact {
        Some(_) => Some(edge_orientation_pca(&field, st.pca_top_fraction)?),
        None => None,
    };
    Ok(PairAnalysis { strain, force, contact, edge, field })
}

/// Convenience wrapper: extract both frames, then analyze the pair.
pub fn process_pair(
    reference: &ColorImage,
    target: &ColorImage,
    config: &PipelineConfig,
) -> Result<(Extraction, Extraction, PairAnalysis)> {
    let ref_extraction = extract_grid(reference, config)?;
    let tgt_extraction = extract_grid(target, config)?;
    let analysis = analyze_pair(&ref_extraction.grid, &tgt_extraction.grid, config)?;
    Ok((ref_extraction, tgt_extraction, analysis))
}
