//! Bundled synthetic benchmark images.
//!
//! Six deterministic 128x128 patterns cover flat regions, hard edges at
//! several spacings, a smooth ramp, and curved contours, so the benchmark
//! runs out of the box without any external image files. User-supplied
//! images join the suite after a center crop to the same scale.

use crate::image::GrayImage;

/// Side length of the bundled images.
pub const SUITE_SIZE: usize = 128;

/// The bundled images with their ids, in id order.
pub fn bundled_suite() -> Vec<(String, GrayImage)> {
    vec![
        ("bars".into(), vertical_bars(SUITE_SIZE, 8)),
        ("checkerboard".into(), checkerboard(SUITE_SIZE, 16)),
        ("disk".into(), filled_disk(SUITE_SIZE)),
        ("gray_ramp".into(), gray_ramp(SUITE_SIZE)),
        ("rings".into(), concentric_rings(SUITE_SIZE)),
        ("step_wedge".into(), step_wedge(SUITE_SIZE)),
    ]
}

/// Eight vertical bands stepping uniformly from 0 to 255.
pub fn step_wedge(n: usize) -> GrayImage {
    GrayImage::from_fn(n, n, |_, col| ((col * 8 / n) * 255 / 7) as u8)
}

/// Alternating 255/0 tiles.
pub fn checkerboard(n: usize, tile: usize) -> GrayImage {
    GrayImage::from_fn(n, n, |row, col| {
        if (row / tile + col / tile).is_multiple_of(2) {
            255
        } else {
            0
        }
    })
}

/// Horizontal linear ramp from 0 to 255.
pub fn gray_ramp(n: usize) -> GrayImage {
    GrayImage::from_fn(n, n, |_, col| (col * 255 / (n - 1)) as u8)
}

/// Bright disk of radius `n/3` on a dark background.
pub fn filled_disk(n: usize) -> GrayImage {
    let center = (n as f64 - 1.0) / 2.0;
    let radius_sq = (n as f64 / 3.0) * (n as f64 / 3.0);
    GrayImage::from_fn(n, n, |row, col| {
        let dr = row as f64 - center;
        let dc = col as f64 - center;
        if dr * dr + dc * dc < radius_sq {
            200
        } else {
            30
        }
    })
}

/// Vertical stripes alternating 220/40 with the given period.
pub fn vertical_bars(n: usize, period: usize) -> GrayImage {
    GrayImage::from_fn(n, n, |_, col| {
        if (col / period).is_multiple_of(2) {
            220
        } else {
            40
        }
    })
}

/// Cosine rings radiating from the center.
pub fn concentric_rings(n: usize) -> GrayImage {
    let center = (n as f64 - 1.0) / 2.0;
    GrayImage::from_fn(n, n, |row, col| {
        let radius = (row as f64 - center).hypot(col as f64 - center);
        (127.5 + 127.5 * (0.35 * radius).cos()).round() as u8
    })
}

/// Central crop with side `min(size, width, height)`.
pub fn center_crop(img: &GrayImage, size: usize) -> GrayImage {
    let side = size.min(img.width()).min(img.height());
    let row0 = (img.height() - side) / 2;
    let col0 = (img.width() - side) / 2;
    GrayImage::from_fn(side, side, |row, col| img.get(row0 + row, col0 + col))
}
