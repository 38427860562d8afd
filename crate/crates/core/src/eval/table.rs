//! Frozen reference PSNR values for the restoration benchmark.
//!
//! These are stored verbatim and displayed next to fresh results; they are
//! never asserted against newly computed PSNRs, because the designs behind
//! them are not fully reproducible from their published parameters.

use super::FilterKind;

/// One stored reference measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    pub image: &'static str,
    pub filter: FilterKind,
    pub kernel_size: usize,
    pub noise_sigma: f64,
    pub psnr_db: f64,
}

const fn cell(
    image: &'static str,
    filter: FilterKind,
    kernel_size: usize,
    noise_sigma: f64,
    psnr_db: f64,
) -> ReferenceCell {
    ReferenceCell {
        image,
        filter,
        kernel_size,
        noise_sigma,
        psnr_db,
    }
}

/// The full reference block: six images, both filters, sizes 5 and 7,
/// noise levels 10 and 20.
pub const REFERENCE_PSNR: &[ReferenceCell] = &[
    cell("House", FilterKind::Log, 5, 10.0, 9.28),
    cell("House", FilterKind::Log, 5, 20.0, 4.88),
    cell("House", FilterKind::Log, 7, 10.0, 9.23),
    cell("House", FilterKind::Log, 7, 20.0, 4.82),
    cell("House", FilterKind::Proposed, 5, 10.0, 14.07),
    cell("House", FilterKind::Proposed, 5, 20.0, 12.35),
    cell("House", FilterKind::Proposed, 7, 10.0, 16.27),
    cell("House", FilterKind::Proposed, 7, 20.0, 15.77),
    cell("Lena", FilterKind::Log, 5, 10.0, 11.26),
    cell("Lena", FilterKind::Log, 5, 20.0, 4.83),
    cell("Lena", FilterKind::Log, 7, 10.0, 11.24),
    cell("Lena", FilterKind::Log, 7, 20.0, 4.83),
    cell("Lena", FilterKind::Proposed, 5, 10.0, 16.30),
    cell("Lena", FilterKind::Proposed, 5, 20.0, 13.70),
    cell("Lena", FilterKind::Proposed, 7, 10.0, 20.15),
    cell("Lena", FilterKind::Proposed, 7, 20.0, 20.08),
    cell("Boat", FilterKind::Log, 5, 10.0, 10.39),
    cell("Boat", FilterKind::Log, 5, 20.0, 5.95),
    cell("Boat", FilterKind::Log, 7, 10.0, 10.32),
    cell("Boat", FilterKind::Log, 7, 20.0, 4.80),
    cell("Boat", FilterKind::Proposed, 5, 10.0, 14.36),
    cell("Boat", FilterKind::Proposed, 5, 20.0, 12.50),
    cell("Boat", FilterKind::Proposed, 7, 10.0, 18.30),
    cell("Boat", FilterKind::Proposed, 7, 20.0, 17.56),
    cell("Bridge", FilterKind::Log, 5, 10.0, 10.38),
    cell("Bridge", FilterKind::Log, 5, 20.0, 5.95),
    cell("Bridge", FilterKind::Log, 7, 10.0, 10.54),
    cell("Bridge", FilterKind::Log, 7, 20.0, 4.77),
    cell("Bridge", FilterKind::Proposed, 5, 10.0, 12.52),
    cell("Bridge", FilterKind::Proposed, 5, 20.0, 11.33),
    cell("Bridge", FilterKind::Proposed, 7, 10.0, 17.57),
    cell("Bridge", FilterKind::Proposed, 7, 20.0, 16.76),
    cell("Gray21", FilterKind::Log, 5, 10.0, 10.28),
    cell("Gray21", FilterKind::Log, 5, 20.0, 4.82),
    cell("Gray21", FilterKind::Log, 7, 10.0, 9.44),
    cell("Gray21", FilterKind::Log, 7, 20.0, 4.85),
    cell("Gray21", FilterKind::Proposed, 5, 10.0, 16.59),
    cell("Gray21", FilterKind::Proposed, 5, 20.0, 14.04),
    cell("Gray21", FilterKind::Proposed, 7, 10.0, 19.75),
    cell("Gray21", FilterKind::Proposed, 7, 20.0, 18.76),
    cell("Elaine", FilterKind::Log, 5, 10.0, 9.28),
    cell("Elaine", FilterKind::Log, 5, 20.0, 4.7),
    cell("Elaine", FilterKind::Log, 7, 10.0, 10.35),
    cell("Elaine", FilterKind::Log, 7, 20.0, 7.73),
    cell("Elaine", FilterKind::Proposed, 5, 10.0, 16.35),
    cell("Elaine", FilterKind::Proposed, 5, 20.0, 13.90),
    cell("Elaine", FilterKind::Proposed, 7, 10.0, 19.97),
    cell("Elaine", FilterKind::Proposed, 7, 20.0, 18.91),
];

/// Looks up one stored reference value.
pub fn reference_lookup(
    image: &str,
    filter: FilterKind,
    kernel_size: usize,
    noise_sigma: f64,
) -> Option<f64> {
    REFERENCE_PSNR
        .iter()
        .find(|c| {
            c.image == image
                && c.filter == filter
                && c.kernel_size == kernel_size
                && c.noise_sigma == noise_sigma
        })
        .map(|c| c.psnr_db)
}
