//! Polygon simplification, quadrilateral filtering, and shape
//! classification.

use serde::{Deserialize, Serialize};

use super::contour::Contour;
use crate::error::{Error, Result};
use crate::imaging::{image_moments, orientation_from_moments, BinaryImage};
use crate::types::Point2;

/// Shoelace area of a closed polygon; positive when the vertices wind
/// counterclockwise (in the raw coordinate frame, regardless of whether y
/// points up or down the screen).
pub fn signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    s / 2.0
}

/// Length of the closed polygon boundary.
pub fn polygon_perimeter(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| poly[i].distance(&poly[(i + 1) % n])).sum()
}

/// Distance from `p` to the closed segment `ab`.
fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return p.distance(&a);
    }
    let t = (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0);
    p.distance(&Point2::new(a.x + t * vx, a.y + t * vy))
}

/// Ramer–Douglas–Peucker simplification of a closed contour.
///
/// The loop is cut at a diameter pair (a point of maximal distance from the
/// trace start, then the point of maximal distance from it), each open arc
/// is simplified against the segment between its endpoints, and the arcs are
/// joined back into a closed vertex list. Cutting at the diameter — rather
/// than at the trace start itself — keeps an arbitrary start pixel in the
/// middle of a straight edge from surviving as a spurious vertex. Every
/// original point stays within `epsilon` of the returned polygon.
pub fn approx_polygon(c: &Contour, epsilon: f64) -> Vec<Point2> {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let pts = c.to_points();
    if pts.len() < 3 {
        return pts;
    }
    let mut a = 0;
    let mut far_d = 0.0;
    for (i, p) in pts.iter().enumerate().skip(1) {
        let d = p.distance(&pts[0]);
        if d > far_d {
            far_d = d;
            a = i;
        }
    }
    if far_d == 0.0 {
        return vec![pts[0]];
    }
    let mut b = 0;
    let mut far_d = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let d = p.distance(&pts[a]);
        if d > far_d {
            far_d = d;
            b = i;
        }
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let first_arc = &pts[lo..=hi];
    let mut second_arc = pts[hi..].to_vec();
    second_arc.extend_from_slice(&pts[..=lo]);
    let mut out = rdp_open(first_arc, epsilon);
    let tail = rdp_open(&second_arc, epsilon);
    out.extend_from_slice(&tail[1..tail.len() - 1]);
    out
}

fn rdp_open(pts: &[Point2], epsilon: f64) -> Vec<Point2> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let (a, b) = (pts[0], pts[pts.len() - 1]);
    let mut split = 0;
    let mut dmax = 0.0;
    for (i, p) in pts.iter().enumerate().take(pts.len() - 1).skip(1) {
        let d = point_segment_distance(*p, a, b);
        if d > dmax {
            dmax = d;
            split = i;
        }
    }
    if dmax > epsilon {
        let mut left = rdp_open(&pts[..=split], epsilon);
        let right = rdp_open(&pts[split..], epsilon);
        left.pop();
        left.extend_from_slice(&right);
        left
    } else {
        vec![a, b]
    }
}

/// Convex hull by monotone chain: counterclockwise (positive shoelace),
/// collinear points dropped. Inputs with fewer than three distinct points
/// come back sorted and deduplicated.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite coordinates"));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point2, a: Point2, b: Point2| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Four-sided marker candidate with counterclockwise corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrilateral {
    pub corners: [Point2; 4],
}

impl Quadrilateral {
    /// Rewinds the corners counterclockwise (positive shoelace) if needed,
    /// keeping the first corner first.
    pub fn new(corners: [Point2; 4]) -> Self {
        if signed_area(&corners) < 0.0 {
            Self { corners: [corners[0], corners[3], corners[2], corners[1]] }
        } else {
            Self { corners }
        }
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.corners).abs()
    }

    pub fn perimeter(&self) -> f64 {
        polygon_perimeter(&self.corners)
    }

    /// Vertex mean; adequate as a display anchor.
    pub fn centroid(&self) -> Point2 {
        let mut x = 0.0;
        let mut y = 0.0;
        for c in &self.corners {
            x += c.x;
            y += c.y;
        }
        Point2::new(x / 4.0, y / 4.0)
    }
}

/// Keeps the polygons that look like solid quadrilaterals: exactly four
/// vertices, shoelace area within `[min_area, max_area]`, and solidity
/// (area over convex-hull area) at least `min_solidity`.
pub fn filter_quadrilaterals(
    polys: &[Vec<Point2>],
    min_area: f64,
    max_area: f64,
    min_solidity: f64,
) -> Vec<Quadrilateral> {
    assert!(min_area < max_area, "area range must be nonempty");
    assert!(
        min_solidity > 0.0 && min_solidity <= 1.0,
        "solidity threshold must be in (0, 1]"
    );
    polys
        .iter()
        .filter_map(|p| {
            if p.len() != 4 {
                return None;
            }
            let area = signed_area(p).abs();
            if area < min_area || area > max_area {
                return None;
            }
            let hull_area = signed_area(&convex_hull(p)).abs();
            if hull_area <= 0.0 || area / hull_area < min_solidity {
                return None;
            }
            Some(Quadrilateral::new([p[0], p[1], p[2], p[3]]))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeLabel {
    Square,
    Rectangle,
    Other,
}

/// Shape classification of a filled contour.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeClass {
    pub label: ShapeLabel,
    /// Principal-axis orientation of the filled region, degrees in [0, 180).
    pub orientation: f64,
    /// Bounding-box width over height.
    pub aspect: f64,
    /// Filled area over bounding-box area.
    pub extent: f64,
}

// Classification cutoffs: high extent with near-unit aspect reads as a
// square, high extent alone as a rectangle, anything else (e.g. a disk,
// extent ~ pi/4) as other. The bounding box is axis-aligned, so rotated
// shapes generally land in "other".
const SQUARE_ASPECT_MIN: f64 = 0.8;
const SQUARE_ASPECT_MAX: f64 = 1.25;
const RECT_EXTENT_MIN: f64 = 0.85;

/// Classifies the region enclosed by a contour from its aspect ratio and
/// extent; the orientation comes from the image moments of the filled
/// region.
pub fn classify_shape(c: &Contour) -> Result<ShapeClass> {
    let poly = c.to_points();
    if poly.len() < 3 || signed_area(&poly) == 0.0 {
        return Err(Error::InvalidParameter(
            "cannot classify a contour that encloses no area".into(),
        ));
    }
    let (mask, w, h) = fill_contour(c);
    let m = image_moments(&mask);
    let orientation = orientation_from_moments(&m)?;
    let extent = m.m00 / (w as f64 * h as f64);
    let aspect = w as f64 / h as f64;
    let label = if extent >= RECT_EXTENT_MIN {
        if (SQUARE_ASPECT_MIN..=SQUARE_ASPECT_MAX).contains(&aspect) {
            ShapeLabel::Square
        } else {
            ShapeLabel::Rectangle
        }
    } else {
        ShapeLabel::Other
    };
    Ok(ShapeClass { label, orientation: orientation.degrees, aspect, extent })
}

/// Rasterizes the contour into its padded bounding box and fills the
/// enclosure: the background is flooded 4-connected from the border, and
/// everything unreached is inside. A closed 8-connected boundary always
/// blocks a 4-connected flood. Returns the mask plus the bounding-box
/// pixel dimensions.
fn fill_contour(c: &Contour) -> (BinaryImage, usize, usize) {
    let pts = c.points();
    let min_x = pts.iter().map(|p| p.0).min().unwrap() as usize;
    let min_y = pts.iter().map(|p| p.1).min().unwrap() as usize;
    let max_x = pts.iter().map(|p| p.0).max().unwrap() as usize;
    let max_y = pts.iter().map(|p| p.1).max().unwrap() as usize;
    let (w, h) = (max_x - min_x + 1, max_y - min_y + 1);
    let mut boundary = BinaryImage::new(w + 2, h + 2);
    for &(x, y) in pts {
        boundary.set(x as usize - min_x + 1, y as usize - min_y + 1, true);
    }
    let mut outside = vec![false; (w + 2) * (h + 2)];
    let mut queue = std::collections::VecDeque::from([(0usize, 0usize)]);
    outside[0] = true;
    while let Some((x, y)) = queue.pop_front() {
        let mut push = |nx: usize, ny: usize, outside: &mut Vec<bool>| {
            let idx = ny * (w + 2) + nx;
            if !outside[idx] && !boundary.get(nx, ny) {
                outside[idx] = true;
                queue.push_back((nx, ny));
            }
        };
        if x > 0 {
            push(x - 1, y, &mut outside);
        }
        if x + 1 < w + 2 {
            push(x + 1, y, &mut outside);
        }
        if y > 0 {
            push(x, y - 1, &mut outside);
        }
        if y + 1 < h + 2 {
            push(x, y + 1, &mut outside);
        }
    }
    let mut filled = BinaryImage::new(w, h);
    for y in 0..h {
        for x in 0..w {
            if !outside[(y + 1) * (w + 2) + (x + 1)] {
                filled.set(x, y, true);
            }
        }
    }
    (filled, w, h)
}
