//! Debug overlay: detected quadrilaterals and corner midpoints drawn onto
//! the frame they were found in. Meant for eyeballing, never for parsing.

use straincam_core::{ColorImage, Point2, Quadrilateral};

const QUAD_COLOR: [u8; 3] = [0, 255, 96];
const MIDPOINT_COLOR: [u8; 3] = [255, 64, 255];

pub fn draw(frame: &ColorImage, quads: &[Quadrilateral], midpoints: &[Point2]) -> ColorImage {
    let mut out = frame.clone();
    for quad in quads {
        for i in 0..4 {
            line(&mut out, quad.corners[i], quad.corners[(i + 1) % 4], QUAD_COLOR);
        }
    }
    for m in midpoints {
        cross(&mut out, *m, 2, MIDPOINT_COLOR);
    }
    out
}

fn put(img: &mut ColorImage, x: isize, y: isize, rgb: [u8; 3]) {
    if x >= 0 && y >= 0 && (x as usize) < img.width() && (y as usize) < img.height() {
        img.set(x as usize, y as usize, rgb);
    }
}

/// Bresenham segment between rounded endpoints.
fn line(img: &mut ColorImage, a: Point2, b: Point2, rgb: [u8; 3]) {
    let (mut x0, mut y0) = (a.x.round() as isize, a.y.round() as isize);
    let (x1, y1) = (b.x.round() as isize, b.y.round() as isize);
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        put(img, x0, y0, rgb);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

fn cross(img: &mut ColorImage, p: Point2, r: isize, rgb: [u8; 3]) {
    let (x, y) = (p.x.round() as isize, p.y.round() as isize);
    for d in -r..=r {
        put(img, x + d, y, rgb);
        put(img, x, y + d, rgb);
    }
}
