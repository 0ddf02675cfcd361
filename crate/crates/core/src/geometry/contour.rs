//! Outer-boundary tracing of connected components.

use crate::imaging::{connected_components, BinaryImage, LabelMap};
use crate::types::Point2;

/// Closed outer boundary of one 8-connected component.
///
/// Points are pixel coordinates in trace order: consecutive points are
/// 8-adjacent and the last point is 8-adjacent to the first. A pixel may
/// appear more than once when the component is locally one pixel thin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    points: Vec<(u32, u32)>,
}

impl Contour {
    pub fn points(&self) -> &[(u32, u32)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Trace positions as floating-point points.
    pub fn to_points(&self) -> Vec<Point2> {
        self.points
            .iter()
            .map(|&(x, y)| Point2::new(x as f64, y as f64))
            .collect()
    }

    /// Length of the closed loop through all trace points.
    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return 0.0;
        }
        let d = |a: (u32, u32), b: (u32, u32)| {
            let dx = a.0 as f64 - b.0 as f64;
            let dy = a.1 as f64 - b.1 as f64;
            (dx * dx + dy * dy).sqrt()
        };
        (0..n).map(|i| d(self.points[i], self.points[(i + 1) % n])).sum()
    }

    fn distinct_points(&self) -> usize {
        let mut seen: Vec<(u32, u32)> = self.points.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

// Moore neighbourhood in clockwise scan order (y grows downward),
// starting at the western neighbour.
const NEIGHBORS: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

/// Outer boundaries of all 8-connected foreground components, one contour
/// per component, ordered by each component's topmost-leftmost pixel.
/// Components whose boundary has fewer than three distinct pixels (one or
/// two isolated pixels) are dropped.
pub fn find_contours(img: &BinaryImage) -> Vec<Contour> {
    let labels = connected_components(img);
    let mut starts: Vec<Option<(usize, usize)>> = vec![None; labels.count() + 1];
    for y in 0..img.height() {
        for x in 0..img.width() {
            let lab = labels.get(x, y) as usize;
            if lab != 0 && starts[lab].is_none() {
                starts[lab] = Some((x, y));
            }
        }
    }
    let sizes = labels.sizes();
    (1..=labels.count())
        .filter_map(|lab| {
            let c = trace_boundary(&labels, lab as u32, starts[lab].unwrap(), sizes[lab - 1]);
            (c.distinct_points() >= 3).then_some(c)
        })
        .collect()
}

/// Moore-neighbour boundary trace. The walk ends when its first transition
/// repeats; comparing full (position, backtrack) states keeps thin shapes
/// from stopping early where the boundary passes through a pixel twice.
fn trace_boundary(labels: &LabelMap, label: u32, start: (usize, usize), size: usize) -> Contour {
    let w = labels.width() as i64;
    let h = labels.height() as i64;
    let fg = |x: i64, y: i64| {
        x >= 0 && y >= 0 && x < w && y < h && labels.get(x as usize, y as usize) == label
    };
    // One clockwise step: scan the neighbours of `cur` starting just after
    // `back`; the first foreground pixel becomes the new position, and the
    // background pixel scanned right before it the new backtrack.
    let step = |cur: (i64, i64), back: (i64, i64)| -> Option<((i64, i64), (i64, i64))> {
        let bidx = NEIGHBORS
            .iter()
            .position(|&(dx, dy)| (cur.0 + dx, cur.1 + dy) == back)
            .expect("backtrack pixel is always a neighbour of the current pixel");
        let mut prev = back;
        for s in 1..=8 {
            let (dx, dy) = NEIGHBORS[(bidx + s) % 8];
            let n = (cur.0 + dx, cur.1 + dy);
            if fg(n.0, n.1) {
                return Some((n, prev));
            }
            prev = n;
        }
        None
    };
    let s = (start.0 as i64, start.1 as i64);
    let mut points = vec![(start.0 as u32, start.1 as u32)];
    // The start pixel is the component's topmost-leftmost, so its western
    // neighbour is guaranteed background and seeds the first scan.
    let Some(first) = step(s, (s.0 - 1, s.1)) else {
        return Contour { points }; // isolated pixel
    };
    let (mut cur, mut back) = first;
    points.push((cur.0 as u32, cur.1 as u32));
    // A boundary visits each pixel at most four times; the cap is a guard
    // against tracer bugs, not a tuning knob.
    while points.len() <= 4 * size + 8 {
        let next = step(cur, back)
            .expect("a component with more than one pixel always has a next boundary pixel");
        if next == first {
            break;
        }
        (cur, back) = next;
        points.push((cur.0 as u32, cur.1 as u32));
    }
    // The walk closes by stepping back onto the start pixel; drop that
    // final revisit so the loop is implicit.
    if points.len() > 1 && points.last() == points.first() {
        points.pop();
    }
    Contour { points }
}
