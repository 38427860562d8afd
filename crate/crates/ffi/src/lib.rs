//! C ABI over the `gmhbt` library.
//!
//! Every fallible function returns a [`GmhbtStatus`] and writes results
//! through out pointers. Images and kernels are opaque handles created and
//! released by this library; passing null where a non-null pointer is
//! expected yields [`GmhbtStatus::NullPointer`] instead of undefined
//! behavior. The C header is generated into `include/gmhbt.h` at build
//! time.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use gmhbt::design::{design_gmhbt_hp, DenomForm, DesignError, DesignSpec, Kernel2D};
use gmhbt::eval::{add_gaussian_noise, hf_restoration_psnr, psnr, EvalError, NoiseSpec};
use gmhbt::filter::{
    convolve2d_image, log_kernel, sharpen, threshold_edges, BoundaryMode, FilterError,
};
use gmhbt::image::{load_pgm, quantize, save_pgm, GrayImage, ImageError, QuantizeMode};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmhbtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    Io = 4,
    MalformedInput = 5,
    TruncatedData = 6,
    NonFinite = 7,
    DegenerateTarget = 8,
    RankDeficient = 9,
    InfeasibleConstraint = 10,
    DimensionMismatch = 11,
    KernelTooLarge = 12,
    LengthMismatch = 13,
    BufferTooSmall = 14,
    Internal = 15,
}

/// Mirrors the library's quantization modes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmhbtQuantizeMode {
    Absolute = 0,
    Offset128 = 1,
}

impl From<GmhbtQuantizeMode> for QuantizeMode {
    fn from(mode: GmhbtQuantizeMode) -> Self {
        match mode {
            GmhbtQuantizeMode::Absolute => QuantizeMode::Absolute,
            GmhbtQuantizeMode::Offset128 => QuantizeMode::Offset128,
        }
    }
}

/// Mirrors the library's convolution border handling.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmhbtBoundaryMode {
    Replicate = 0,
    Zero = 1,
}

impl From<GmhbtBoundaryMode> for BoundaryMode {
    fn from(mode: GmhbtBoundaryMode) -> Self {
        match mode {
            GmhbtBoundaryMode::Replicate => BoundaryMode::Replicate,
            GmhbtBoundaryMode::Zero => BoundaryMode::Zero,
        }
    }
}

/// Denominator form of the desired high-pass response.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmhbtDenomForm {
    Butterworth = 0,
    Literal = 1,
}

impl From<GmhbtDenomForm> for DenomForm {
    fn from(form: GmhbtDenomForm) -> Self {
        match form {
            GmhbtDenomForm::Butterworth => DenomForm::Butterworth,
            GmhbtDenomForm::Literal => DenomForm::Literal,
        }
    }
}

/// Plain-data mirror of the design parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GmhbtDesignSpec {
    pub size: u32,
    pub sigma_w: f64,
    pub support_w: f64,
    pub sigma_g: f64,
    pub omega_c: f64,
    pub response_order: u32,
    pub denom_form: GmhbtDenomForm,
    pub grid_m: u32,
    pub grid_k: u32,
    pub weight_pass: f64,
    pub weight_stop: f64,
    pub dc_gain: f64,
}

impl From<&GmhbtDesignSpec> for DesignSpec {
    fn from(spec: &GmhbtDesignSpec) -> Self {
        DesignSpec {
            size: spec.size as usize,
            sigma_w: spec.sigma_w,
            support_w: spec.support_w,
            sigma_g: spec.sigma_g,
            omega_c: spec.omega_c,
            response_order: spec.response_order,
            denom_form: spec.denom_form.into(),
            grid_m: spec.grid_m as usize,
            grid_k: spec.grid_k as usize,
            weight_pass: spec.weight_pass,
            weight_stop: spec.weight_stop,
            dc_gain: spec.dc_gain,
        }
    }
}

/// Opaque grayscale image handle.
pub struct GmhbtImage(GrayImage);

/// Opaque kernel handle.
pub struct GmhbtKernel(Kernel2D);

fn status_of_image_error(err: &ImageError) -> GmhbtStatus {
    match err {
        ImageError::MalformedHeader(_) => GmhbtStatus::MalformedInput,
        ImageError::TruncatedData { .. } => GmhbtStatus::TruncatedData,
        ImageError::BadDimensions { .. } => GmhbtStatus::InvalidArgument,
        ImageError::NonFiniteValue => GmhbtStatus::NonFinite,
        ImageError::Io(_) => GmhbtStatus::Io,
    }
}

fn status_of_design_error(err: &DesignError) -> GmhbtStatus {
    match err {
        DesignError::InvalidSpec(_) => GmhbtStatus::InvalidArgument,
        DesignError::DegenerateTarget => GmhbtStatus::DegenerateTarget,
        DesignError::RankDeficient(_) => GmhbtStatus::RankDeficient,
        DesignError::InfeasibleConstraint => GmhbtStatus::InfeasibleConstraint,
        DesignError::LengthMismatch { .. } => GmhbtStatus::LengthMismatch,
        DesignError::MalformedKernel(_) => GmhbtStatus::MalformedInput,
        DesignError::Io(_) => GmhbtStatus::Io,
    }
}

fn status_of_filter_error(err: &FilterError) -> GmhbtStatus {
    match err {
        FilterError::KernelTooLarge { .. } => GmhbtStatus::KernelTooLarge,
        FilterError::DimensionMismatch { .. } => GmhbtStatus::DimensionMismatch,
    }
}

fn status_of_eval_error(err: &EvalError) -> GmhbtStatus {
    match err {
        EvalError::DimensionMismatch { .. } => GmhbtStatus::DimensionMismatch,
        EvalError::EmptyBenchmark => GmhbtStatus::InvalidArgument,
        EvalError::Design(e) => status_of_design_error(e),
        EvalError::Filter(e) => status_of_filter_error(e),
        EvalError::Image(e) => status_of_image_error(e),
    }
}

/// Runs `body`, converting panics into [`GmhbtStatus::Internal`] so they
/// never unwind across the C boundary.
fn guard(body: impl FnOnce() -> GmhbtStatus) -> GmhbtStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(GmhbtStatus::Internal)
}

unsafe fn path_from(ptr: *const c_char) -> Result<&'static str, GmhbtStatus> {
    if ptr.is_null() {
        return Err(GmhbtStatus::NullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| GmhbtStatus::InvalidUtf8)
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> GmhbtStatus {
    if out.is_null() {
        return GmhbtStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(value));
    GmhbtStatus::Ok
}

/// Human-readable description of a status code; the string is static and
/// must not be freed.
#[no_mangle]
pub extern "C" fn gmhbt_status_message(status: GmhbtStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        GmhbtStatus::Ok => b"ok\0",
        GmhbtStatus::NullPointer => b"null pointer argument\0",
        GmhbtStatus::InvalidArgument => b"invalid argument\0",
        GmhbtStatus::InvalidUtf8 => b"path is not valid UTF-8\0",
        GmhbtStatus::Io => b"i/o failure\0",
        GmhbtStatus::MalformedInput => b"malformed input file\0",
        GmhbtStatus::TruncatedData => b"truncated payload\0",
        GmhbtStatus::NonFinite => b"non-finite value\0",
        GmhbtStatus::DegenerateTarget => b"design target is identically zero\0",
        GmhbtStatus::RankDeficient => b"system is rank deficient\0",
        GmhbtStatus::InfeasibleConstraint => b"constraints are inconsistent\0",
        GmhbtStatus::DimensionMismatch => b"dimensions do not match\0",
        GmhbtStatus::KernelTooLarge => b"kernel does not fit inside the image\0",
        GmhbtStatus::LengthMismatch => b"buffer length mismatch\0",
        GmhbtStatus::BufferTooSmall => b"destination buffer too small\0",
        GmhbtStatus::Internal => b"internal error\0",
    };
    text.as_ptr().cast()
}

/// Default design parameters for an odd kernel size.
#[no_mangle]
pub extern "C" fn gmhbt_design_spec_default(size: u32) -> GmhbtDesignSpec {
    let spec = DesignSpec::for_size(size as usize);
    GmhbtDesignSpec {
        size,
        sigma_w: spec.sigma_w,
        support_w: spec.support_w,
        sigma_g: spec.sigma_g,
        omega_c: spec.omega_c,
        response_order: spec.response_order,
        denom_form: GmhbtDenomForm::Butterworth,
        grid_m: spec.grid_m as u32,
        grid_k: spec.grid_k as u32,
        weight_pass: spec.weight_pass,
        weight_stop: spec.weight_stop,
        dc_gain: spec.dc_gain,
    }
}

/// Designs the high-pass kernel described by `spec`.
///
/// # Safety
/// `spec` must point to a valid [`GmhbtDesignSpec`] and `out` to a writable
/// pointer slot. On success `*out` owns a kernel that must be released with
/// [`gmhbt_kernel_free`].
#[no_mangle]
pub unsafe extern "C" fn gmhbt_design(
    spec: *const GmhbtDesignSpec,
    out: *mut *mut GmhbtKernel,
) -> GmhbtStatus {
    if spec.is_null() {
        return GmhbtStatus::NullPointer;
    }
    let spec = DesignSpec::from(&*spec);
    guard(|| match design_gmhbt_hp(&spec) {
        Ok(kernel) => write_out(out, GmhbtKernel(kernel)),
        Err(err) => status_of_design_error(&err),
    })
}

/// Builds the zero-sum Laplacian-of-Gaussian baseline kernel.
///
/// # Safety
/// `out` must point to a writable pointer slot; release the result with
/// [`gmhbt_kernel_free`].
#[no_mangle]
pub unsafe extern "C" fn gmhbt_log_kernel(
    size: u32,
    sigma: f64,
    out: *mut *mut GmhbtKernel,
) -> GmhbtStatus {
    if size.is_multiple_of(2) || size < 3 || !(sigma.is_finite() && sigma > 0.0) {
        return GmhbtStatus::InvalidArgument;
    }
    guard(|| write_out(out, GmhbtKernel(log_kernel(size as usize, sigma))))
}

/// Reads a kernel text file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_kernel_load(
    path: *const c_char,
    out: *mut *mut GmhbtKernel,
) -> GmhbtStatus {
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guard(|| match Kernel2D::load(path) {
        Ok(kernel) => write_out(out, GmhbtKernel(kernel)),
        Err(err) => status_of_design_error(&err),
    })
}

/// Writes a kernel in the text format read back by [`gmhbt_kernel_load`].
///
/// # Safety
/// `kernel` must be a live handle from this library; `path` a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_kernel_save(
    kernel: *const GmhbtKernel,
    path: *const c_char,
) -> GmhbtStatus {
    if kernel.is_null() {
        return GmhbtStatus::NullPointer;
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guard(|| match (*kernel).0.save(path) {
        Ok(()) => GmhbtStatus::Ok,
        Err(err) => status_of_design_error(&err),
    })
}

/// Side length of a kernel; 0 for a null handle.
///
/// # Safety
/// `kernel` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_kernel_size(kernel: *const GmhbtKernel) -> u32 {
    if kernel.is_null() {
        return 0;
    }
    (*kernel).0.size() as u32
}

/// Sum of all kernel coefficients; NaN for a null handle.
///
/// # Safety
/// `kernel` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_kernel_sum(kernel: *const GmhbtKernel) -> f64 {
    if kernel.is_null() {
        return f64::NAN;
    }
    (*kernel).0.sum()
}

/// Copies the row-major coefficients into `buffer` (`len` must be at least
/// `size * size`).
///
/// # Safety
/// `kernel` must be a live handle and `buffer` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_kernel_copy_coeffs(
    kernel: *const GmhbtKernel,
    buffer: *mut f64,
    len: usize,
) -> GmhbtStatus {
    if kernel.is_null() || buffer.is_null() {
        return GmhbtStatus::NullPointer;
    }
    let coeffs = (*kernel).0.coeffs();
    if len < coeffs.len() {
        return GmhbtStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(coeffs.as_ptr(), buffer, coeffs.len());
    GmhbtStatus::Ok
}

/// Releases a kernel handle; null is a no-op.
///
/// # Safety
/// `kernel` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_kernel_free(kernel: *mut GmhbtKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Wraps a row-major 8-bit pixel buffer of `width * height` bytes.
///
/// # Safety
/// `pixels` must be readable for `width * height` bytes; `out` a writable
/// pointer slot. Release the result with [`gmhbt_image_free`].
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_create(
    width: u32,
    height: u32,
    pixels: *const u8,
    out: *mut *mut GmhbtImage,
) -> GmhbtStatus {
    if pixels.is_null() {
        return GmhbtStatus::NullPointer;
    }
    let len = width as usize * height as usize;
    let data = std::slice::from_raw_parts(pixels, len).to_vec();
    guard(|| match GrayImage::new(width as usize, height as usize, data) {
        Ok(img) => write_out(out, GmhbtImage(img)),
        Err(err) => status_of_image_error(&err),
    })
}

/// Reads a binary PGM file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_load_pgm(
    path: *const c_char,
    out: *mut *mut GmhbtImage,
) -> GmhbtStatus {
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guard(|| match load_pgm(path) {
        Ok(img) => write_out(out, GmhbtImage(img)),
        Err(err) => status_of_image_error(&err),
    })
}

/// Writes a binary PGM file.
///
/// # Safety
/// `image` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_save_pgm(
    image: *const GmhbtImage,
    path: *const c_char,
) -> GmhbtStatus {
    if image.is_null() {
        return GmhbtStatus::NullPointer;
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    guard(|| match save_pgm(&(*image).0, path) {
        Ok(()) => GmhbtStatus::Ok,
        Err(err) => status_of_image_error(&err),
    })
}

/// Image width in pixels; 0 for a null handle.
///
/// # Safety
/// `image` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_width(image: *const GmhbtImage) -> u32 {
    if image.is_null() {
        0
    } else {
        (*image).0.width() as u32
    }
}

/// Image height in pixels; 0 for a null handle.
///
/// # Safety
/// `image` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_height(image: *const GmhbtImage) -> u32 {
    if image.is_null() {
        0
    } else {
        (*image).0.height() as u32
    }
}

/// Copies the row-major pixels into `buffer` (`len` must be at least
/// `width * height`).
///
/// # Safety
/// `image` must be a live handle and `buffer` writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_copy_pixels(
    image: *const GmhbtImage,
    buffer: *mut u8,
    len: usize,
) -> GmhbtStatus {
    if image.is_null() || buffer.is_null() {
        return GmhbtStatus::NullPointer;
    }
    let pixels = (*image).0.pixels();
    if len < pixels.len() {
        return GmhbtStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(pixels.as_ptr(), buffer, pixels.len());
    GmhbtStatus::Ok
}

/// Releases an image handle; null is a no-op.
///
/// # Safety
/// `image` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_image_free(image: *mut GmhbtImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Convolves the image with the kernel and quantizes the response.
///
/// # Safety
/// `image` and `kernel` must be live handles; `out` a writable pointer
/// slot.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_apply(
    image: *const GmhbtImage,
    kernel: *const GmhbtKernel,
    mode: GmhbtQuantizeMode,
    boundary: GmhbtBoundaryMode,
    out: *mut *mut GmhbtImage,
) -> GmhbtStatus {
    if image.is_null() || kernel.is_null() {
        return GmhbtStatus::NullPointer;
    }
    guard(|| {
        let response = match convolve2d_image(&(*image).0, &(*kernel).0, boundary.into()) {
            Ok(map) => map,
            Err(err) => return status_of_filter_error(&err),
        };
        match quantize(&response, mode.into()) {
            Ok(img) => write_out(out, GmhbtImage(img)),
            Err(err) => status_of_image_error(&err),
        }
    })
}

/// Convolves, then thresholds the response magnitude at
/// `fraction * max |response|` into a binary 0/255 image.
///
/// # Safety
/// `image` and `kernel` must be live handles; `out` a writable pointer
/// slot.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_edges(
    image: *const GmhbtImage,
    kernel: *const GmhbtKernel,
    fraction: f64,
    boundary: GmhbtBoundaryMode,
    out: *mut *mut GmhbtImage,
) -> GmhbtStatus {
    if image.is_null() || kernel.is_null() {
        return GmhbtStatus::NullPointer;
    }
    if !(0.0..=1.0).contains(&fraction) {
        return GmhbtStatus::InvalidArgument;
    }
    guard(|| {
        let response = match convolve2d_image(&(*image).0, &(*kernel).0, boundary.into()) {
            Ok(map) => map,
            Err(err) => return status_of_filter_error(&err),
        };
        write_out(out, GmhbtImage(threshold_edges(&response, fraction)))
    })
}

/// Superimposes the scaled filter response onto the image.
///
/// # Safety
/// `image` and `kernel` must be live handles; `out` a writable pointer
/// slot.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_sharpen(
    image: *const GmhbtImage,
    kernel: *const GmhbtKernel,
    lambda: f64,
    boundary: GmhbtBoundaryMode,
    out: *mut *mut GmhbtImage,
) -> GmhbtStatus {
    if image.is_null() || kernel.is_null() {
        return GmhbtStatus::NullPointer;
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return GmhbtStatus::InvalidArgument;
    }
    guard(|| {
        let response = match convolve2d_image(&(*image).0, &(*kernel).0, boundary.into()) {
            Ok(map) => map,
            Err(err) => return status_of_filter_error(&err),
        };
        match sharpen(&(*image).0, &response, lambda) {
            Ok(img) => write_out(out, GmhbtImage(img)),
            Err(err) => status_of_filter_error(&err),
        }
    })
}

/// Adds seeded Gaussian noise (standard deviation `sigma`, rounded and
/// clamped per pixel).
///
/// # Safety
/// `image` must be a live handle; `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_add_noise(
    image: *const GmhbtImage,
    sigma: f64,
    seed: u64,
    out: *mut *mut GmhbtImage,
) -> GmhbtStatus {
    if image.is_null() {
        return GmhbtStatus::NullPointer;
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return GmhbtStatus::InvalidArgument;
    }
    guard(|| {
        let noisy = add_gaussian_noise(&(*image).0, &NoiseSpec { sigma, seed });
        write_out(out, GmhbtImage(noisy))
    })
}

/// Peak signal-to-noise ratio between two images of equal dimensions, in
/// decibels; identical images yield positive infinity.
///
/// # Safety
/// `a` and `b` must be live handles; `out_db` writable.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_psnr(
    a: *const GmhbtImage,
    b: *const GmhbtImage,
    out_db: *mut f64,
) -> GmhbtStatus {
    if a.is_null() || b.is_null() || out_db.is_null() {
        return GmhbtStatus::NullPointer;
    }
    guard(|| match psnr(&(*a).0, &(*b).0) {
        Ok(value) => {
            *out_db = value.as_db();
            GmhbtStatus::Ok
        }
        Err(err) => status_of_eval_error(&err),
    })
}

/// PSNR between the quantized high-frequency maps of the noisy and clean
/// image under the same kernel.
///
/// # Safety
/// All handles must be live; `out_db` writable.
#[no_mangle]
pub unsafe extern "C" fn gmhbt_hf_restoration_psnr(
    original: *const GmhbtImage,
    noisy: *const GmhbtImage,
    kernel: *const GmhbtKernel,
    mode: GmhbtQuantizeMode,
    out_db: *mut f64,
) -> GmhbtStatus {
    if original.is_null() || noisy.is_null() || kernel.is_null() || out_db.is_null() {
        return GmhbtStatus::NullPointer;
    }
    guard(
        || match hf_restoration_psnr(&(*original).0, &(*noisy).0, &(*kernel).0, mode.into()) {
            Ok(value) => {
                *out_db = value.as_db();
                GmhbtStatus::Ok
            }
            Err(err) => status_of_eval_error(&err),
        },
    )
}
