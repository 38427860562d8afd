//! Noise injection, the high-frequency restoration PSNR metric, and the
//! benchmark harness comparing the designed kernel against the LoG baseline.

pub mod suite;
mod table;

use std::fmt;

use thiserror::Error;

use crate::design::{design_gmhbt_hp, DesignError, DesignSpec, Kernel2D};
use crate::filter::{convolve2d_image, log_kernel, BoundaryMode, FilterError};
use crate::image::{quantize, GrayImage, ImageError, QuantizeMode, LUMINANCE_LEVELS};

pub use table::{reference_lookup, ReferenceCell, REFERENCE_PSNR};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("dimensions {a:?} and {b:?} must match")]
    DimensionMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
    #[error("benchmark needs at least one image, one size, and one noise level")]
    EmptyBenchmark,
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Additive Gaussian noise parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Standard deviation in luminance units; zero means no noise.
    pub sigma: f64,
    /// Seed of the deterministic generator.
    pub seed: u64,
}

/// splitmix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Deterministic stream of standard normal deviates: a splitmix64 counter
/// feeding the Box-Muller transform. The generator is defined here, in
/// full, so that seeded outputs never depend on an external crate's
/// sampling internals.
struct NormalSource {
    state: u64,
    spare: Option<f64>,
}

impl NormalSource {
    fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        mix64(self.state)
    }

    fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        const SCALE: f64 = 1.0 / 9_007_199_254_740_992.0; // 2^-53
        let u1 = ((self.next_u64() >> 11) as f64 + 1.0) * SCALE; // (0, 1]
        let u2 = (self.next_u64() >> 11) as f64 * SCALE; // [0, 1)
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Adds independent rounded Gaussian noise to every pixel, clamping to
/// `[0, 255]`. A zero sigma returns the input unchanged; identical inputs
/// and seeds give identical outputs.
pub fn add_gaussian_noise(img: &GrayImage, noise: &NoiseSpec) -> GrayImage {
    assert!(
        noise.sigma.is_finite() && noise.sigma >= 0.0,
        "noise sigma must be finite and nonnegative"
    );
    if noise.sigma == 0.0 {
        return img.clone();
    }
    let mut source = NormalSource::new(noise.seed);
    GrayImage::from_fn(img.width(), img.height(), |row, col| {
        let bump = (noise.sigma * source.next_standard()).round();
        (f64::from(img.get(row, col)) + bump).clamp(0.0, 255.0) as u8
    })
}

/// Peak signal-to-noise ratio between two images of equal dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    /// `10 log10(255^2 / MSE)` in decibels.
    Decibels(f64),
    /// Zero mean-squared error; the ratio is unbounded.
    PerfectMatch,
}

impl Psnr {
    /// Decibel value, `+inf` for a perfect match.
    pub fn as_db(self) -> f64 {
        match self {
            Psnr::Decibels(v) => v,
            Psnr::PerfectMatch => f64::INFINITY,
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Decibels(v) => write!(f, "{v:.6}"),
            Psnr::PerfectMatch => f.write_str("inf"),
        }
    }
}

/// `10 log10((L-1)^2 / MSE)` with `L = 256`. Identical images yield
/// [`Psnr::PerfectMatch`] rather than a number.
pub fn psnr(y: &GrayImage, z: &GrayImage) -> Result<Psnr, EvalError> {
    if y.dimensions() != z.dimensions() {
        return Err(EvalError::DimensionMismatch {
            a: y.dimensions(),
            b: z.dimensions(),
        });
    }
    let sum_sq: f64 = y
        .pixels()
        .iter()
        .zip(z.pixels())
        .map(|(&a, &b)| {
            let d = f64::from(a) - f64::from(b);
            d * d
        })
        .sum();
    if sum_sq == 0.0 {
        return Ok(Psnr::PerfectMatch);
    }
    let mse = sum_sq / (y.width() * y.height()) as f64;
    let peak = f64::from(LUMINANCE_LEVELS - 1);
    Ok(Psnr::Decibels(10.0 * (peak * peak / mse).log10()))
}

/// PSNR between the quantized high-frequency maps of the noisy and the
/// clean image under the same kernel (replicate boundary).
pub fn hf_restoration_psnr(
    original: &GrayImage,
    noisy: &GrayImage,
    kernel: &Kernel2D,
    mode: QuantizeMode,
) -> Result<Psnr, EvalError> {
    if original.dimensions() != noisy.dimensions() {
        return Err(EvalError::DimensionMismatch {
            a: original.dimensions(),
            b: noisy.dimensions(),
        });
    }
    let noisy_map = quantize(
        &convolve2d_image(noisy, kernel, BoundaryMode::Replicate)?,
        mode,
    )?;
    let clean_map = quantize(
        &convolve2d_image(original, kernel, BoundaryMode::Replicate)?,
        mode,
    )?;
    psnr(&noisy_map, &clean_map)
}

/// Which kernel produced a benchmark row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FilterKind {
    Proposed,
    Log,
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::Proposed => "proposed",
            FilterKind::Log => "log",
        })
    }
}

/// One benchmark measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub filter: FilterKind,
    pub kernel_size: usize,
    pub noise_sigma: f64,
    pub psnr: Psnr,
    pub quantize_mode: QuantizeMode,
    pub seed: u64,
}

/// Margin of the proposed kernel over the baseline for one benchmark cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMargin {
    pub image: String,
    pub kernel_size: usize,
    pub noise_sigma: f64,
    pub margin_db: f64,
}

/// Benchmark results plus the stored reference block displayed alongside.
#[derive(Debug, Clone)]
pub struct BenchReport {
    /// Rows in canonical order: image id, kernel size, noise level, filter.
    pub rows: Vec<BenchRow>,
    pub reference: &'static [ReferenceCell],
}

pub const CSV_HEADER: &str = "image,filter,kernel_size,noise_sigma,psnr_db,quantize_mode,seed";

impl BenchReport {
    /// CSV serialization; the header is fixed and a perfect match is
    /// written as the literal string `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.image,
                row.filter,
                row.kernel_size,
                row.noise_sigma,
                row.psnr,
                row.quantize_mode,
                row.seed
            ));
        }
        out
    }

    /// JSON mirror of the CSV with the same fields per row.
    pub fn to_json(&self) -> String {
        use serde_json::{json, Value};
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                json!({
                    "image": row.image,
                    "filter": row.filter.to_string(),
                    "kernel_size": row.kernel_size,
                    "noise_sigma": row.noise_sigma,
                    "psnr_db": match row.psnr {
                        Psnr::Decibels(v) => json!(v),
                        Psnr::PerfectMatch => Value::String("inf".into()),
                    },
                    "quantize_mode": row.quantize_mode.to_string(),
                    "seed": row.seed,
                })
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&json!({ "rows": rows })).expect("report serializes");
        text.push('\n');
        text
    }

    /// Per-cell margins `proposed - log`, in row order.
    pub fn margins(&self) -> Vec<CellMargin> {
        let mut out = Vec::new();
        for pair in self.rows.chunks(2) {
            if pair.len() == 2
                && pair[0].filter == FilterKind::Proposed
                && pair[1].filter == FilterKind::Log
            {
                out.push(CellMargin {
                    image: pair[0].image.clone(),
                    kernel_size: pair[0].kernel_size,
                    noise_sigma: pair[0].noise_sigma,
                    margin_db: pair[0].psnr.as_db() - pair[1].psnr.as_db(),
                });
            }
        }
        out
    }

    /// Mean margin over all cells, when every margin is finite.
    pub fn mean_margin_db(&self) -> Option<f64> {
        let margins = self.margins();
        if margins.is_empty() || margins.iter().any(|m| !m.margin_db.is_finite()) {
            return None;
        }
        Some(margins.iter().map(|m| m.margin_db).sum::<f64>() / margins.len() as f64)
    }

    /// Number of cells the proposed kernel wins, out of the total.
    pub fn win_count(&self) -> (usize, usize) {
        let margins = self.margins();
        let wins = margins.iter().filter(|m| m.margin_db > 0.0).count();
        (wins, margins.len())
    }
}

/// Derives the noise seed for one benchmark cell.
///
/// The chain is fixed so that reports reproduce everywhere:
/// `mix(mix(mix(master ^ fnv1a(image_id)) ^ kernel_size) ^ sigma_bits)`,
/// where `mix` is the splitmix64 finalizer, `fnv1a` the 64-bit FNV-1a hash
/// of the id bytes, and `sigma_bits` the IEEE-754 bit pattern of the noise
/// level.
pub fn cell_seed(master_seed: u64, image_id: &str, kernel_size: usize, noise_sigma: f64) -> u64 {
    let mut h = mix64(master_seed ^ fnv1a(image_id.as_bytes()));
    h = mix64(h ^ kernel_size as u64);
    mix64(h ^ noise_sigma.to_bits())
}

/// Runs the restoration benchmark.
///
/// For every kernel size, the proposed kernel is designed from
/// `spec.resized(size)` and the LoG baseline built at `sigma = size / 6`;
/// per (image, size, sigma) cell, one noisy image is generated from
/// [`cell_seed`] and both kernels are scored on it. Rows come back in
/// canonical order (image id, size, noise level, proposed before log), so
/// the report is identical no matter how the work is scheduled.
pub fn run_benchmark(
    images: &[(String, GrayImage)],
    sizes: &[usize],
    sigmas: &[f64],
    master_seed: u64,
    spec: &DesignSpec,
    mode: QuantizeMode,
) -> Result<BenchReport, EvalError> {
    if images.is_empty() || sizes.is_empty() || sigmas.is_empty() {
        return Err(EvalError::EmptyBenchmark);
    }
    let mut rows = Vec::with_capacity(images.len() * sizes.len() * sigmas.len() * 2);
    for &size in sizes {
        let proposed = design_gmhbt_hp(&spec.resized(size))?;
        let baseline = log_kernel(size, size as f64 / 6.0);
        for (id, image) in images {
            for &sigma in sigmas {
                let seed = cell_seed(master_seed, id, size, sigma);
                let noisy = add_gaussian_noise(image, &NoiseSpec { sigma, seed });
                for (filter, kernel) in
                    [(FilterKind::Proposed, &proposed), (FilterKind::Log, &baseline)]
                {
                    let value = hf_restoration_psnr(image, &noisy, kernel, mode)?;
                    rows.push(BenchRow {
                        image: id.clone(),
                        filter,
                        kernel_size: size,
                        noise_sigma: sigma,
                        psnr: value,
                        quantize_mode: mode,
                        seed,
                    });
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        a.image
            .cmp(&b.image)
            .then(a.kernel_size.cmp(&b.kernel_size))
            .then(a.noise_sigma.total_cmp(&b.noise_sigma))
            .then(a.filter.cmp(&b.filter))
    });
    Ok(BenchReport {
        rows,
        reference: REFERENCE_PSNR,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::DesignSpec;

    #[test]
    fn zero_sigma_is_the_identity() {
        let img = GrayImage::from_fn(16, 16, |r, c| (r * c) as u8);
        let out = add_gaussian_noise(&img, &NoiseSpec { sigma: 0.0, seed: 9 });
        assert_eq!(out, img);
    }

    #[test]
    fn same_seed_reproduces_different_seeds_differ() {
        let img = GrayImage::constant(64, 64, 100);
        let a = add_gaussian_noise(&img, &NoiseSpec { sigma: 5.0, seed: 7 });
        let b = add_gaussian_noise(&img, &NoiseSpec { sigma: 5.0, seed: 7 });
        let c = add_gaussian_noise(&img, &NoiseSpec { sigma: 5.0, seed: 8 });
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_moments_match_requested_sigma() {
        let img = GrayImage::constant(256, 256, 128);
        let out = add_gaussian_noise(&img, &NoiseSpec { sigma: 20.0, seed: 42 });
        let n = out.pixels().len() as f64;
        let mean: f64 = out
            .pixels()
            .iter()
            .map(|&p| f64::from(p) - 128.0)
            .sum::<f64>()
            / n;
        let var: f64 = out
            .pixels()
            .iter()
            .map(|&p| {
                let d = f64::from(p) - 128.0 - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        assert!(mean.abs() <= 0.5, "mean {mean}");
        let std = var.sqrt();
        assert!((std - 20.0).abs() <= 1.0, "std {std}");
    }

    #[test]
    fn psnr_closed_forms() {
        let a = GrayImage::constant(32, 32, 100);
        assert_eq!(psnr(&a, &a).unwrap(), Psnr::PerfectMatch);

        let b = GrayImage::constant(32, 32, 116); // |diff| = 16 everywhere
        match psnr(&a, &b).unwrap() {
            Psnr::Decibels(v) => assert!((v - 24.0475).abs() <= 1e-3, "got {v}"),
            Psnr::PerfectMatch => panic!("not a perfect match"),
        }

        let black = GrayImage::constant(8, 8, 0);
        let white = GrayImage::constant(8, 8, 255);
        assert_eq!(psnr(&black, &white).unwrap(), Psnr::Decibels(0.0));
    }

    #[test]
    fn psnr_is_symmetric_and_strictly_decreasing_per_pixel() {
        let a = GrayImage::from_fn(8, 8, |r, c| (r * 8 + c) as u8);
        let mut data = a.pixels().to_vec();
        data[13] = data[13].wrapping_add(40);
        let b = GrayImage::new(8, 8, data.clone()).unwrap();
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());

        data[13] = data[13].wrapping_add(10); // grow that one difference
        let c = GrayImage::new(8, 8, data).unwrap();
        assert!(psnr(&a, &c).unwrap().as_db() < psnr(&a, &b).unwrap().as_db());
    }

    #[test]
    fn psnr_rejects_mismatched_dimensions() {
        let a = GrayImage::constant(4, 4, 0);
        let b = GrayImage::constant(4, 5, 0);
        assert!(matches!(
            psnr(&a, &b),
            Err(EvalError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn restoration_psnr_is_perfect_without_noise() {
        let img = suite::filled_disk(32);
        let kernel = design_gmhbt_hp(&DesignSpec::for_size(5)).unwrap();
        let value = hf_restoration_psnr(&img, &img, &kernel, QuantizeMode::Absolute).unwrap();
        assert_eq!(value, Psnr::PerfectMatch);
    }

    #[test]
    fn more_noise_degrades_restoration_on_median() {
        let img = suite::center_crop(&suite::filled_disk(64), 48);
        let kernel = design_gmhbt_hp(&DesignSpec::for_size(5)).unwrap();
        let median = |sigma: f64| {
            let mut values: Vec<f64> = (0..10)
                .map(|seed| {
                    let noisy = add_gaussian_noise(&img, &NoiseSpec { sigma, seed });
                    hf_restoration_psnr(&img, &noisy, &kernel, QuantizeMode::Absolute)
                        .unwrap()
                        .as_db()
                })
                .collect();
            values.sort_by(f64::total_cmp);
            (values[4] + values[5]) / 2.0
        };
        assert!(median(10.0) > median(20.0));
    }

    #[test]
    fn stored_reference_values_cover_the_headline_cell() {
        assert_eq!(reference_lookup("House", FilterKind::Log, 5, 10.0), Some(9.28));
        assert_eq!(
            reference_lookup("House", FilterKind::Proposed, 5, 10.0),
            Some(14.07)
        );
    }

    #[test]
    fn benchmark_emits_two_rows_per_cell() {
        let images = vec![("disk".to_string(), suite::center_crop(&suite::filled_disk(64), 48))];
        let report = run_benchmark(
            &images,
            &[5],
            &[20.0],
            1,
            &DesignSpec::for_size(5),
            QuantizeMode::Absolute,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].filter, FilterKind::Proposed);
        assert_eq!(report.rows[1].filter, FilterKind::Log);
        assert_eq!(report.rows[0].seed, report.rows[1].seed);
    }

    #[test]
    fn benchmark_is_deterministic_and_order_independent() {
        let mut images = vec![
            ("disk".to_string(), suite::center_crop(&suite::filled_disk(64), 48)),
            ("wedge".to_string(), suite::center_crop(&suite::step_wedge(64), 48)),
        ];
        let spec = DesignSpec::for_size(5);
        let first = run_benchmark(&images, &[5], &[10.0, 20.0], 3, &spec, QuantizeMode::Absolute)
            .unwrap();
        let second = run_benchmark(&images, &[5], &[10.0, 20.0], 3, &spec, QuantizeMode::Absolute)
            .unwrap();
        assert_eq!(first.to_csv(), second.to_csv());

        images.reverse();
        let shuffled = run_benchmark(&images, &[5], &[10.0, 20.0], 3, &spec, QuantizeMode::Absolute)
            .unwrap();
        assert_eq!(first.to_csv(), shuffled.to_csv());
    }

    #[test]
    fn benchmark_rejects_empty_inputs() {
        let spec = DesignSpec::for_size(5);
        assert!(matches!(
            run_benchmark(&[], &[5], &[20.0], 1, &spec, QuantizeMode::Absolute),
            Err(EvalError::EmptyBenchmark)
        ));
    }

    #[test]
    fn cell_seed_is_sensitive_to_every_component() {
        let base = cell_seed(1, "lena", 5, 20.0);
        assert_eq!(base, cell_seed(1, "lena", 5, 20.0));
        assert_ne!(base, cell_seed(2, "lena", 5, 20.0));
        assert_ne!(base, cell_seed(1, "lena2", 5, 20.0));
        assert_ne!(base, cell_seed(1, "lena", 7, 20.0));
        assert_ne!(base, cell_seed(1, "lena", 5, 10.0));
    }

    #[test]
    fn cell_seed_mixing_chain_is_frozen() {
        // Regression pins for the documented chain; changing the mixing
        // function would silently invalidate archived reports.
        assert_eq!(cell_seed(1, "bars", 5, 20.0), 16025478706022543878);
        assert_eq!(cell_seed(1, "disk", 5, 20.0), 1993069275973848140);
    }

    #[test]
    fn csv_has_the_fixed_header_and_inf_sentinel() {
        let report = BenchReport {
            rows: vec![BenchRow {
                image: "flat".into(),
                filter: FilterKind::Proposed,
                kernel_size: 5,
                noise_sigma: 0.0,
                psnr: Psnr::PerfectMatch,
                quantize_mode: QuantizeMode::Absolute,
                seed: 11,
            }],
            reference: REFERENCE_PSNR,
        };
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "image,filter,kernel_size,noise_sigma,psnr_db,quantize_mode,seed"
        );
        assert_eq!(lines.next().unwrap(), "flat,proposed,5,0,inf,absolute,11");
    }

    #[test]
    fn json_mirrors_the_rows() {
        let images = vec![("disk".to_string(), suite::center_crop(&suite::filled_disk(64), 48))];
        let report = run_benchmark(
            &images,
            &[5],
            &[20.0],
            1,
            &DesignSpec::for_size(5),
            QuantizeMode::Absolute,
        )
        .unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let rows = parsed["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["image"], "disk");
        assert_eq!(rows[0]["filter"], "proposed");
        assert!(rows[0]["psnr_db"].is_number());
    }

    #[test]
    fn normal_source_moments_are_standard() {
        let mut source = NormalSource::new(12345);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let z = source.next_standard();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
