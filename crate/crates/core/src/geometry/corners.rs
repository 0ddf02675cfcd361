//! Linking neighboring quadrilaterals through their closest corners.
//!
//! Each unordered pair of quads contributes at most one segment: the one
//! joining their closest pair of corners, kept only if it is no longer than
//! `max_dist`. The segment midpoints are the control points later sorted
//! into a grid.

use serde::{Deserialize, Serialize};

use crate::types::Point2;

use super::Quadrilateral;

/// Straight segment between two corner points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Self {
        Self { a, b }
    }

    pub fn midpoint(&self) -> Point2 {
        self.a.midpoint(&self.b)
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }
}

/// Corner pairs within this fraction of the smaller quad's edge scale above
/// the minimum distance count as ties and are broken positionally (see
/// `best_pair`). Facing edges of adjacent quads produce two corner pairs
/// straddling the gap; deformation can separate their lengths by several
/// pixels, while every other pair is at least an edge length away, so an
/// edge-proportional band keeps exactly the facing pairs in play.
const TIE_BAND_EDGE_FRACTION: f64 = 0.4;

/// For every unordered pair of distinct quads, emit the segment joining
/// their closest corners if that distance is at most `max_dist`.
///
/// At most one segment per quad pair; the output order follows the input
/// pair order (i < j). Near-ties for the closest pair are resolved toward
/// the topmost (then leftmost) midpoint so the same physical link is chosen
/// regardless of small coordinate perturbations.
pub fn connect_corners(quads: &[Quadrilateral], max_dist: f64) -> Vec<Segment> {
    assert!(max_dist > 0.0, "max_dist must be positive");
    let mut segments = Vec::new();
    for i in 0..quads.len() {
        for j in i + 1..quads.len() {
            if let Some(seg) = best_pair(&quads[i], &quads[j], max_dist) {
                segments.push(seg);
            }
        }
    }
    segments
}

/// Midpoints of the given segments, in order.
pub fn midpoints(segments: &[Segment]) -> Vec<Point2> {
    segments.iter().map(Segment::midpoint).collect()
}

/// Closest admissible corner pair between two quads, or `None` if even the
/// closest pair exceeds `max_dist`.
fn best_pair(p: &Quadrilateral, q: &Quadrilateral, max_dist: f64) -> Option<Segment> {
    let mut pairs: Vec<(f64, Point2, Point2)> = Vec::with_capacity(16);
    for a in p.corners {
        for b in q.corners {
            pairs.push((a.distance(&b), a, b));
        }
    }
    let d_min = pairs
        .iter()
        .map(|(d, _, _)| *d)
        .fold(f64::INFINITY, f64::min);
    if d_min > max_dist {
        return None;
    }
    // Candidates within the tie band of the minimum. Admissibility belongs
    // to the link, not the pair: once d_min qualifies, the partner pair of
    // the same facing edge stays a candidate even if deformation stretched
    // it past max_dist.
    let tie = (p.area().sqrt().min(q.area().sqrt()) * TIE_BAND_EDGE_FRACTION).max(1e-9);
    let mut candidates: Vec<(f64, Point2, Point2)> =
        pairs.into_iter().filter(|(d, _, _)| *d <= d_min + tie).collect();
    // Topmost midpoint wins; midpoints within the tie band vertically of
    // the topmost stay in play and the leftmost of those wins.
    let y_min = candidates
        .iter()
        .map(|(_, a, b)| a.midpoint(b).y)
        .fold(f64::INFINITY, f64::min);
    candidates.retain(|(_, a, b)| a.midpoint(b).y <= y_min + tie);
    candidates.sort_by(|(_, a1, b1), (_, a2, b2)| {
        let m1 = a1.midpoint(b1);
        let m2 = a2.midpoint(b2);
        let key1 = (m1.x, m1.y, sorted_coords(*a1, *b1));
        let key2 = (m2.x, m2.y, sorted_coords(*a2, *b2));
        key1.partial_cmp(&key2).expect("corner coordinates are finite")
    });
    let (_, a, b) = candidates[0];
    Some(Segment::new(a, b))
}

/// Corner coordinates in a canonical order so the residual tie-break does
/// not depend on which quad came first in the pair.
fn sorted_coords(a: Point2, b: Point2) -> [(f64, f64); 2] {
    let ka = (a.y, a.x);
    let kb = (b.y, b.x);
    if ka <= kb {
        [ka, kb]
    } else {
        [kb, ka]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64, y: f64, side: f64) -> Quadrilateral {
        Quadrilateral::new([
            Point2::new(x, y),
            Point2::new(x, y + side),
            Point2::new(x + side, y + side),
            Point2::new(x + side, y),
        ])
    }

    #[test]
    fn close_squares_link_once() {
        // Gap of 5 px between facing edges.
        let quads = [square(0.0, 0.0, 10.0), square(15.0, 0.0, 10.0)];
        let segs = connect_corners(&quads, 10.0);
        assert_eq!(segs.len(), 1);
        assert!((segs[0].length() - 5.0).abs() < 1e-12);
        let m = segs[0].midpoint();
        assert!((m.x - 12.5).abs() < 1e-12);
    }

    #[test]
    fn distant_squares_stay_unlinked() {
        let quads = [square(0.0, 0.0, 10.0), square(15.0, 0.0, 10.0)];
        assert!(connect_corners(&quads, 3.0).is_empty());
    }

    #[test]
    fn collinear_row_links_neighbors_only() {
        let quads = [
            square(0.0, 0.0, 10.0),
            square(15.0, 0.0, 10.0),
            square(30.0, 0.0, 10.0),
        ];
        let segs = connect_corners(&quads, 10.0);
        // Adjacent gaps are 5 px, the skip gap is 20 px.
        assert_eq!(segs.len(), 2);
        for seg in &segs {
            assert!((seg.length() - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_quad_yields_nothing() {
        let quads = [square(0.0, 0.0, 10.0)];
        assert!(connect_corners(&quads, 100.0).is_empty());
    }

    #[test]
    fn midpoints_symmetric_under_input_reversal() {
        let quads = [
            square(0.0, 0.0, 10.0),
            square(15.0, 1.0, 10.0),
            square(0.0, 14.0, 10.0),
            square(15.0, 15.5, 10.0),
        ];
        let reversed: Vec<_> = quads.iter().rev().copied().collect();
        let mut fwd: Vec<(f64, f64)> = midpoints(&connect_corners(&quads, 8.0))
            .iter()
            .map(|p| (p.x, p.y))
            .collect();
        let mut rev: Vec<(f64, f64)> = midpoints(&connect_corners(&reversed, 8.0))
            .iter()
            .map(|p| (p.x, p.y))
            .collect();
        fwd.sort_by(|a, b| a.partial_cmp(b).unwrap());
        rev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(fwd, rev);
    }

    #[test]
    fn facing_edges_resolve_to_top_corner_pair() {
        // Two exactly aligned squares: the two facing-edge corner pairs are
        // tied at 5 px. The top pair must win. Edge length exceeds max_dist
        // so the vertical grouping cannot span the whole edge.
        let quads = [square(0.0, 0.0, 20.0), square(25.0, 0.0, 20.0)];
        let segs = connect_corners(&quads, 10.0);
        assert_eq!(segs.len(), 1);
        let m = segs[0].midpoint();
        assert!((m.y - 0.0).abs() < 1e-12, "expected top pair, got y {}", m.y);
    }

    #[test]
    fn jittered_facing_edges_still_pick_top_pair() {
        // The bottom pair is now strictly closer (4.8 vs 5.0 px) but within
        // the tie band, so the positional rule still selects the top pair.
        let quads = [
            square(0.0, 0.0, 20.0),
            Quadrilateral::new([
                Point2::new(25.0, 0.0),
                Point2::new(24.8, 20.0),
                Point2::new(45.0, 20.0),
                Point2::new(45.0, 0.0),
            ]),
        ];
        let segs = connect_corners(&quads, 10.0);
        assert_eq!(segs.len(), 1);
        let m = segs[0].midpoint();
        assert!(m.y < 5.0, "expected top pair, got midpoint y {}", m.y);
    }
}
