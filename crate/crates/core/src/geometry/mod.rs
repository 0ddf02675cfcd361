//! Contour extraction, polygon processing, and control-grid assembly.
//!
//! This module turns a binary marker mask into an ordered grid of control
//! points: trace component boundaries, simplify them to polygons, keep the
//! quadrilaterals, join nearby corners of neighbouring quads, and arrange
//! the joint midpoints into rows and columns.

mod contour;
mod corners;
mod grid;
mod polygon;

pub use contour::{find_contours, Contour};
pub use corners::{connect_corners, midpoints, Segment};
pub use grid::{sort_into_grid, ControlGrid, DEFAULT_ROW_GAP_FACTOR};
pub use polygon::{
    approx_polygon, classify_shape, convex_hull, filter_quadrilaterals, polygon_perimeter,
    signed_area, Quadrilateral, ShapeClass, ShapeLabel,
};

use crate::imaging::{connected_components, BinaryImage};
use crate::types::Point2;

/// Per-component centroids (m10/m00, m01/m00) of a mask, one per
/// 8-connected component, in component label order (row-major first
/// appearance).
pub fn centroids_from_mask(mask: &BinaryImage) -> Vec<Point2> {
    let labels = connected_components(mask);
    let mut sx = vec![0.0f64; labels.count() + 1];
    let mut sy = vec![0.0f64; labels.count() + 1];
    let mut n = vec![0usize; labels.count() + 1];
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            let lab = labels.get(x, y) as usize;
            if lab != 0 {
                sx[lab] += x as f64;
                sy[lab] += y as f64;
                n[lab] += 1;
            }
        }
    }
    (1..=labels.count())
        .map(|lab| Point2::new(sx[lab] / n[lab] as f64, sy[lab] / n[lab] as f64))
        .collect()
}
