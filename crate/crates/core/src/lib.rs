//! Design and evaluation of a non-separable 2D high-pass FIR filter.
//!
//! The library covers the full pipeline:
//!
//! - [`image`] — 8-bit grayscale rasters, binary PGM I/O, and quantization
//!   between real-valued response maps and pixels.
//! - [`design`] — synthesis of the Gaussian-modulated hyperbolic-tangent
//!   (GMHBT) high-pass kernel by weighted, equality-constrained least squares
//!   on a frequency lattice.
//! - [`filter`] — 2D convolution, the Laplacian-of-Gaussian baseline kernel,
//!   threshold edge extraction, and high-frequency superposition sharpening.
//! - [`eval`] — seeded Gaussian noise, the PSNR restoration metric between
//!   high-frequency maps, and the benchmark harness comparing the designed
//!   kernel against the LoG baseline.
//!
//! The `gmhbt` binary exposes the same pipeline as subcommands; see the
//! repository README for examples.

pub mod design;
pub mod eval;
pub mod filter;
pub mod image;

pub use design::{
    assemble_kernel, design_gmhbt_hp, design_gmhbt_hp_detailed, DenomForm, DesignError,
    DesignSpec, Kernel2D, LsqSystem,
};
pub use eval::{add_gaussian_noise, hf_restoration_psnr, psnr, run_benchmark, NoiseSpec, Psnr};
pub use filter::{convolve2d, convolve2d_image, log_kernel, sharpen, threshold_edges, BoundaryMode};
pub use image::{load_pgm, quantize, save_pgm, GrayImage, ImageError, QuantizeMode, RealMap};
