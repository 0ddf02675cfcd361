//! Binary morphology with square structuring elements.
//!
//! Out-of-bounds pixels count as background, i.e. masks are treated as
//! finite subsets of the plane. `morph_close` pads its working buffer so
//! intermediate dilations cannot be clipped by the frame; that keeps the
//! operation a true closing (extensive and idempotent).

use super::BinaryImage;

fn window_op(img: &BinaryImage, kernel: usize, any: bool) -> BinaryImage {
    let r = (kernel / 2) as isize;
    let mut out = BinaryImage::new(img.width(), img.height());
    for y in 0..img.height() as isize {
        for x in 0..img.width() as isize {
            let mut hit = !any;
            'scan: for dy in -r..=r {
                for dx in -r..=r {
                    let v = img.get_or_background(x + dx, y + dy);
                    if any && v {
                        hit = true;
                        break 'scan;
                    }
                    if !any && !v {
                        hit = false;
                        break 'scan;
                    }
                }
            }
            out.set(x as usize, y as usize, hit);
        }
    }
    out
}

fn check_kernel(kernel: usize) {
    assert!(kernel >= 3 && kernel % 2 == 1, "kernel side must be odd and at least 3");
}

/// Set a pixel if any pixel under the kernel window is set.
pub fn dilate(img: &BinaryImage, kernel: usize) -> BinaryImage {
    check_kernel(kernel);
    window_op(img, kernel, true)
}

/// Keep a pixel only if every pixel under the kernel window is set.
pub fn erode(img: &BinaryImage, kernel: usize) -> BinaryImage {
    check_kernel(kernel);
    window_op(img, kernel, false)
}

/// `iterations` dilations followed by `iterations` erosions with the same
/// square kernel. Fills gaps narrower than the accumulated dilation reach.
pub fn morph_close(img: &BinaryImage, kernel: usize, iterations: usize) -> BinaryImage {
    check_kernel(kernel);
    assert!(iterations >= 1, "iterations must be positive");

    // Pad so dilated foreground never touches the working frame; clipping
    // there would break idempotence near the original border.
    let pad = iterations * (kernel / 2);
    let (w, h) = (img.width(), img.height());
    let mut work = BinaryImage::new(w + 2 * pad, h + 2 * pad);
    for y in 0..h {
        for x in 0..w {
            work.set(x + pad, y + pad, img.get(x, y));
        }
    }
    for _ in 0..iterations {
        work = window_op(&work, kernel, true);
    }
    for _ in 0..iterations {
        work = window_op(&work, kernel, false);
    }
    let mut out = BinaryImage::new(w, h);
    for y in 0..h {
        for x in 0..w {
            out.set(x, y, work.get(x + pad, y + pad));
        }
    }
    out
}
