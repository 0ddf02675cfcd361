//! Intensity filters: CLAHE, bilateral smoothing, Sobel edges, thresholding.

use super::{BinaryImage, GrayImage};
use crate::error::{Error, Result};

/// Contrast-limited adaptive histogram equalization.
///
/// The image is divided into square tiles of `tile` pixels (edge tiles are
/// truncated). Each tile gets a clipped-histogram equalization map; the clip
/// level is `clip_limit` times the uniform bin count, clipped excess is
/// redistributed over all bins. Output values blend the four nearest tile
/// maps bilinearly. `tile >= 1`, `clip_limit >= 1`.
pub fn clahe(img: &GrayImage, tile: usize, clip_limit: f64) -> GrayImage {
    assert!(tile >= 1, "tile size must be positive");
    assert!(clip_limit >= 1.0, "clip limit must be at least 1");
    let (w, h) = (img.width(), img.height());
    let tiles_x = w.div_ceil(tile);
    let tiles_y = h.div_ceil(tile);

    let mut luts = Vec::with_capacity(tiles_x * tiles_y);
    for ty in 0..tiles_y {
        for tx in 0..tiles_x {
            let x0 = tx * tile;
            let y0 = ty * tile;
            let x1 = (x0 + tile).min(w);
            let y1 = (y0 + tile).min(h);
            luts.push(tile_lut(img, x0, y0, x1, y1, clip_limit));
        }
    }

    let mut out = GrayImage::new(w, h);
    let tile_f = tile as f64;
    for y in 0..h {
        // Position relative to tile centers; edge pixels clamp to the
        // nearest map instead of extrapolating.
        let tyf = (y as f64 + 0.5) / tile_f - 0.5;
        let ty0 = tyf.floor().clamp(0.0, (tiles_y - 1) as f64) as usize;
        let ty1 = (ty0 + 1).min(tiles_y - 1);
        let wy = (tyf - ty0 as f64).clamp(0.0, 1.0);
        for x in 0..w {
            let txf = (x as f64 + 0.5) / tile_f - 0.5;
            let tx0 = txf.floor().clamp(0.0, (tiles_x - 1) as f64) as usize;
            let tx1 = (tx0 + 1).min(tiles_x - 1);
            let wx = (txf - tx0 as f64).clamp(0.0, 1.0);

            let v = img.get(x, y) as usize;
            let p00 = luts[ty0 * tiles_x + tx0][v] as f64;
            let p10 = luts[ty0 * tiles_x + tx1][v] as f64;
            let p01 = luts[ty1 * tiles_x + tx0][v] as f64;
            let p11 = luts[ty1 * tiles_x + tx1][v] as f64;
            let top = p00 + (p10 - p00) * wx;
            let bot = p01 + (p11 - p01) * wx;
            let blended = top + (bot - top) * wy;
            out.set(x, y, blended.round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}

fn tile_lut(img: &GrayImage, x0: usize, y0: usize, x1: usize, y1: usize, clip_limit: f64) -> [u8; 256] {
    let mut hist = [0u64; 256];
    for y in y0..y1 {
        for x in x0..x1 {
            hist[img.get(x, y) as usize] += 1;
        }
    }
    let area = ((x1 - x0) * (y1 - y0)) as u64;

    // A single occupied bin leaves equalization undefined; keep levels
    // as-is before clipping can smear the mass over the histogram.
    if hist.iter().any(|&c| c == area) {
        let mut lut = [0u8; 256];
        for (i, slot) in lut.iter_mut().enumerate() {
            *slot = i as u8;
        }
        return lut;
    }

    // Clip and redistribute the excess uniformly, remainder one bin at a
    // time with a fixed stride so the result is deterministic.
    let clip = ((clip_limit * area as f64 / 256.0).floor() as u64).max(1);
    let mut excess = 0u64;
    for count in hist.iter_mut() {
        if *count > clip {
            excess += *count - clip;
            *count = clip;
        }
    }
    if excess > 0 {
        let batch = excess / 256;
        let mut residual = excess % 256;
        for count in hist.iter_mut() {
            *count += batch;
        }
        if residual > 0 {
            let step = (256 / residual as usize).max(1);
            let mut i = 0;
            while residual > 0 && i < 256 {
                hist[i] += 1;
                residual -= 1;
                i += step;
            }
            // Stride rounding can leave a remainder; sweep it into the tail.
            let mut i = 0;
            while residual > 0 {
                hist[i] += 1;
                residual -= 1;
                i = (i + 1) % 256;
            }
        }
    }

    let mut lut = [0u8; 256];
    let mut cdf = 0u64;
    let mut cdf_min = 0u64;
    for &count in hist.iter() {
        if count > 0 {
            cdf_min = count;
            break;
        }
    }
    let denom = (area - cdf_min) as f64;
    for (i, &count) in hist.iter().enumerate() {
        cdf += count;
        let v = (cdf.saturating_sub(cdf_min)) as f64 / denom * 255.0;
        lut[i] = v.round().clamp(0.0, 255.0) as u8;
    }
    lut
}

/// Edge-preserving smoothing: Gaussian-space x Gaussian-range weighted mean
/// over a (2*radius+1)^2 window with replicated borders.
pub fn bilateral_filter(img: &GrayImage, radius: usize, sigma_space: f64, sigma_range: f64) -> GrayImage {
    assert!(radius >= 1, "radius must be positive");
    assert!(sigma_space > 0.0 && sigma_range > 0.0, "sigmas must be positive");
    let (w, h) = (img.width(), img.height());
    let r = radius as isize;

    let side = 2 * radius + 1;
    let mut spatial = vec![0.0f64; side * side];
    for dy in -r..=r {
        for dx in -r..=r {
            let idx = ((dy + r) as usize) * side + (dx + r) as usize;
            spatial[idx] =
                (-((dx * dx + dy * dy) as f64) / (2.0 * sigma_space * sigma_space)).exp();
        }
    }
    let mut range = [0.0f64; 256];
    for (d, slot) in range.iter_mut().enumerate() {
        *slot = (-((d * d) as f64) / (2.0 * sigma_range * sigma_range)).exp();
    }

    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let center = img.get(x, y);
            let mut sum = 0.0;
            let mut wsum = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let v = img.get_clamped(x as isize + dx, y as isize + dy);
                    let diff = (v as i32 - center as i32).unsigned_abs() as usize;
                    let weight =
                        spatial[((dy + r) as usize) * side + (dx + r) as usize] * range[diff];
                    sum += v as f64 * weight;
                    wsum += weight;
                }
            }
            out.set(x, y, (sum / wsum).round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}

/// Combined Sobel response min(255, (|Gx| + |Gy|) / 2) with replicated
/// borders. Needs at least a 3x3 image.
pub fn sobel_magnitude(img: &GrayImage) -> Result<GrayImage> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::InvalidDimensions(format!(
            "sobel needs at least 3x3, got {w}x{h}"
        )));
    }
    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let p = |dx: isize, dy: isize| img.get_clamped(x as isize + dx, y as isize + dy) as i32;
            let gx = -p(-1, -1) + p(1, -1) - 2 * p(-1, 0) + 2 * p(1, 0) - p(-1, 1) + p(1, 1);
            let gy = -p(-1, -1) - 2 * p(0, -1) - p(1, -1) + p(-1, 1) + 2 * p(0, 1) + p(1, 1);
            let mag = ((gx.abs() + gy.abs()) / 2).min(255);
            out.set(x, y, mag as u8);
        }
    }
    Ok(out)
}

/// Foreground where intensity is strictly greater than `t`.
pub fn threshold(img: &GrayImage, t: u8) -> BinaryImage {
    let mut out = BinaryImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            out.set(x, y, img.get(x, y) > t);
        }
    }
    out
}
