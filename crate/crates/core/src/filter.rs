//! Kernel application: 2D convolution, the LoG baseline kernel, threshold
//! edge extraction, and high-frequency superposition sharpening.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::design::Kernel2D;
use crate::image::{GrayImage, RealMap};

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("kernel of size {kernel} does not fit inside a {width}x{height} image")]
    KernelTooLarge {
        kernel: usize,
        width: usize,
        height: usize,
    },
    #[error("dimensions {a:?} and {b:?} must match")]
    DimensionMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
}

/// How samples outside the image are read during convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryMode {
    /// Clamp to the nearest edge pixel.
    #[default]
    Replicate,
    /// Treat everything outside the image as zero.
    Zero,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Replicate => "replicate",
            BoundaryMode::Zero => "zero",
        })
    }
}

impl FromStr for BoundaryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "replicate" => Ok(BoundaryMode::Replicate),
            "zero" => Ok(BoundaryMode::Zero),
            other => Err(format!(
                "unknown boundary mode {other:?}; expected \"replicate\" or \"zero\""
            )),
        }
    }
}

/// True 2D convolution: `y(x1, x2) = sum_a sum_b h(a, b) * I(x1 - a, x2 - b)`
/// with the kernel offsets running over its full footprint and borders
/// handled per `boundary`. The output has the input's dimensions.
pub fn convolve2d(
    input: &RealMap,
    kernel: &Kernel2D,
    boundary: BoundaryMode,
) -> Result<RealMap, FilterError> {
    let (width, height) = input.dimensions();
    if kernel.size() >= width || kernel.size() >= height {
        return Err(FilterError::KernelTooLarge {
            kernel: kernel.size(),
            width,
            height,
        });
    }
    let half = kernel.half() as isize;
    let last_row = height as isize - 1;
    let last_col = width as isize - 1;
    Ok(RealMap::from_fn(width, height, |row, col| {
        let mut acc = 0.0;
        for a in -half..=half {
            for b in -half..=half {
                let src_row = row as isize - a;
                let src_col = col as isize - b;
                let value = match boundary {
                    BoundaryMode::Replicate => input.get(
                        src_row.clamp(0, last_row) as usize,
                        src_col.clamp(0, last_col) as usize,
                    ),
                    BoundaryMode::Zero => {
                        if (0..=last_row).contains(&src_row) && (0..=last_col).contains(&src_col) {
                            input.get(src_row as usize, src_col as usize)
                        } else {
                            0.0
                        }
                    }
                };
                acc += kernel.at(a, b) * value;
            }
        }
        acc
    }))
}

/// [`convolve2d`] on an 8-bit image.
pub fn convolve2d_image(
    img: &GrayImage,
    kernel: &Kernel2D,
    boundary: BoundaryMode,
) -> Result<RealMap, FilterError> {
    convolve2d(&RealMap::from(img), kernel, boundary)
}

/// Samples the analytic Laplacian-of-Gaussian,
/// `-1/(pi sigma^4) (1 - r^2/(2 sigma^2)) e^(-r^2/(2 sigma^2))`,
/// on the integer lattice, then subtracts the mean so the coefficients sum
/// to zero.
///
/// Panics if `size` is even or below 3, or if `sigma` is not positive.
pub fn log_kernel(size: usize, sigma: f64) -> Kernel2D {
    assert!(size % 2 == 1 && size >= 3, "LoG size must be odd and >= 3");
    assert!(sigma > 0.0 && sigma.is_finite(), "LoG sigma must be positive");
    let half = ((size - 1) / 2) as isize;
    let sigma_sq = sigma * sigma;
    let scale = -1.0 / (PI * sigma_sq * sigma_sq);
    let mut coeffs = Vec::with_capacity(size * size);
    for i in -half..=half {
        for j in -half..=half {
            let r_sq = (i * i + j * j) as f64;
            let shaped = r_sq / (2.0 * sigma_sq);
            coeffs.push(scale * (1.0 - shaped) * (-shaped).exp());
        }
    }
    let mean = coeffs.iter().sum::<f64>() / coeffs.len() as f64;
    for v in &mut coeffs {
        *v -= mean;
    }
    Kernel2D::new(size, coeffs).expect("LoG construction is well-formed")
}

/// Marks pixels whose response magnitude strictly exceeds
/// `fraction * max |hf|`; marked pixels are 255, the rest 0.
pub fn threshold_edges(hf: &RealMap, fraction: f64) -> GrayImage {
    let peak = hf.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = fraction * peak;
    GrayImage::from_fn(hf.width(), hf.height(), |row, col| {
        if hf.get(row, col).abs() > cut {
            255
        } else {
            0
        }
    })
}

/// Superimposes the scaled high-frequency map onto the image:
/// `round(clamp(img + lambda * hf, 0, 255))` with half-away-from-zero
/// rounding.
pub fn sharpen(img: &GrayImage, hf: &RealMap, lambda: f64) -> Result<GrayImage, FilterError> {
    if img.dimensions() != hf.dimensions() {
        return Err(FilterError::DimensionMismatch {
            a: img.dimensions(),
            b: hf.dimensions(),
        });
    }
    Ok(GrayImage::from_fn(img.width(), img.height(), |row, col| {
        let v = f64::from(img.get(row, col)) + lambda * hf.get(row, col);
        v.clamp(0.0, 255.0).round() as u8
    }))
}
