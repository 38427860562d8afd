/* C interface to the gmhbt filter-design and image-filtering library. */

#ifndef GMHBT_H
#define GMHBT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum GmhbtStatus {
  GMHBT_STATUS_OK = 0,
  GMHBT_STATUS_NULL_POINTER = 1,
  GMHBT_STATUS_INVALID_ARGUMENT = 2,
  GMHBT_STATUS_INVALID_UTF8 = 3,
  GMHBT_STATUS_IO = 4,
  GMHBT_STATUS_MALFORMED_INPUT = 5,
  GMHBT_STATUS_TRUNCATED_DATA = 6,
  GMHBT_STATUS_NON_FINITE = 7,
  GMHBT_STATUS_DEGENERATE_TARGET = 8,
  GMHBT_STATUS_RANK_DEFICIENT = 9,
  GMHBT_STATUS_INFEASIBLE_CONSTRAINT = 10,
  GMHBT_STATUS_DIMENSION_MISMATCH = 11,
  GMHBT_STATUS_KERNEL_TOO_LARGE = 12,
  GMHBT_STATUS_LENGTH_MISMATCH = 13,
  GMHBT_STATUS_BUFFER_TOO_SMALL = 14,
  GMHBT_STATUS_INTERNAL = 15,
} GmhbtStatus;

/**
 * Denominator form of the desired high-pass response.
 */
typedef enum GmhbtDenomForm {
  GMHBT_DENOM_FORM_BUTTERWORTH = 0,
  GMHBT_DENOM_FORM_LITERAL = 1,
} GmhbtDenomForm;

/**
 * Mirrors the library's quantization modes.
 */
typedef enum GmhbtQuantizeMode {
  GMHBT_QUANTIZE_MODE_ABSOLUTE = 0,
  GMHBT_QUANTIZE_MODE_OFFSET128 = 1,
} GmhbtQuantizeMode;

/**
 * Mirrors the library's convolution border handling.
 */
typedef enum GmhbtBoundaryMode {
  GMHBT_BOUNDARY_MODE_REPLICATE = 0,
  GMHBT_BOUNDARY_MODE_ZERO = 1,
} GmhbtBoundaryMode;

/**
 * Opaque grayscale image handle.
 */
typedef struct GmhbtImage GmhbtImage;

/**
 * Opaque kernel handle.
 */
typedef struct GmhbtKernel GmhbtKernel;

/**
 * Plain-data mirror of the design parameters.
 */
typedef struct GmhbtDesignSpec {
  uint32_t size;
  double sigma_w;
  double support_w;
  double sigma_g;
  double omega_c;
  uint32_t response_order;
  enum GmhbtDenomForm denom_form;
  uint32_t grid_m;
  uint32_t grid_k;
  double weight_pass;
  double weight_stop;
  double dc_gain;
} GmhbtDesignSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Human-readable description of a status code; the string is static and
 * must not be freed.
 */
const char *gmhbt_status_message(enum GmhbtStatus status);

/**
 * Default design parameters for an odd kernel size.
 */
struct GmhbtDesignSpec gmhbt_design_spec_default(uint32_t size);

/**
 * Designs the high-pass kernel described by `spec`.
 *
 * # Safety
 * `spec` must point to a valid [`GmhbtDesignSpec`] and `out` to a writable
 * pointer slot. On success `*out` owns a kernel that must be released with
 * [`gmhbt_kernel_free`].
 */
enum GmhbtStatus gmhbt_design(const struct GmhbtDesignSpec *spec, struct GmhbtKernel **out);

/**
 * Builds the zero-sum Laplacian-of-Gaussian baseline kernel.
 *
 * # Safety
 * `out` must point to a writable pointer slot; release the result with
 * [`gmhbt_kernel_free`].
 */
enum GmhbtStatus gmhbt_log_kernel(uint32_t size, double sigma, struct GmhbtKernel **out);

/**
 * Reads a kernel text file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a writable pointer slot.
 */
enum GmhbtStatus gmhbt_kernel_load(const char *path, struct GmhbtKernel **out);

/**
 * Writes a kernel in the text format read back by [`gmhbt_kernel_load`].
 *
 * # Safety
 * `kernel` must be a live handle from this library; `path` a
 * NUL-terminated string.
 */
enum GmhbtStatus gmhbt_kernel_save(const struct GmhbtKernel *kernel, const char *path);

/**
 * Side length of a kernel; 0 for a null handle.
 *
 * # Safety
 * `kernel` must be null or a live handle from this library.
 */
uint32_t gmhbt_kernel_size(const struct GmhbtKernel *kernel);

/**
 * Sum of all kernel coefficients; NaN for a null handle.
 *
 * # Safety
 * `kernel` must be null or a live handle from this library.
 */
double gmhbt_kernel_sum(const struct GmhbtKernel *kernel);

/**
 * Copies the row-major coefficients into `buffer` (`len` must be at least
 * `size * size`).
 *
 * # Safety
 * `kernel` must be a live handle and `buffer` writable for `len` values.
 */
enum GmhbtStatus gmhbt_kernel_copy_coeffs(const struct GmhbtKernel *kernel,
                                          double *buffer,
                                          size_t len);

/**
 * Releases a kernel handle; null is a no-op.
 *
 * # Safety
 * `kernel` must be null or a handle from this library not yet freed.
 */
void gmhbt_kernel_free(struct GmhbtKernel *kernel);

/**
 * Wraps a row-major 8-bit pixel buffer of `width * height` bytes.
 *
 * # Safety
 * `pixels` must be readable for `width * height` bytes; `out` a writable
 * pointer slot. Release the result with [`gmhbt_image_free`].
 */
enum GmhbtStatus gmhbt_image_create(uint32_t width,
                                    uint32_t height,
                                    const uint8_t *pixels,
                                    struct GmhbtImage **out);

/**
 * Reads a binary PGM file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a writable pointer slot.
 */
enum GmhbtStatus gmhbt_image_load_pgm(const char *path, struct GmhbtImage **out);

/**
 * Writes a binary PGM file.
 *
 * # Safety
 * `image` must be a live handle; `path` a NUL-terminated string.
 */
enum GmhbtStatus gmhbt_image_save_pgm(const struct GmhbtImage *image, const char *path);

/**
 * Image width in pixels; 0 for a null handle.
 *
 * # Safety
 * `image` must be null or a live handle from this library.
 */
uint32_t gmhbt_image_width(const struct GmhbtImage *image);

/**
 * Image height in pixels; 0 for a null handle.
 *
 * # Safety
 * `image` must be null or a live handle from this library.
 */
uint32_t gmhbt_image_height(const struct GmhbtImage *image);

/**
 * Copies the row-major pixels into `buffer` (`len` must be at least
 * `width * height`).
 *
 * # Safety
 * `image` must be a live handle and `buffer` writable for `len` bytes.
 */
enum GmhbtStatus gmhbt_image_copy_pixels(const struct GmhbtImage *image,
                                         uint8_t *buffer,
                                         size_t len);

/**
 * Releases an image handle; null is a no-op.
 *
 * # Safety
 * `image` must be null or a handle from this library not yet freed.
 */
void gmhbt_image_free(struct GmhbtImage *image);

/**
 * Convolves the image with the kernel and quantizes the response.
 *
 * # Safety
 * `image` and `kernel` must be live handles; `out` a writable pointer
 * slot.
 */
enum GmhbtStatus gmhbt_apply(const struct GmhbtImage *image,
                             const struct GmhbtKernel *kernel,
                             enum GmhbtQuantizeMode mode,
                             enum GmhbtBoundaryMode boundary,
                             struct GmhbtImage **out);

/**
 * Convolves, then thresholds the response magnitude at
 * `fraction * max |response|` into a binary 0/255 image.
 *
 * # Safety
 * `image` and `kernel` must be live handles; `out` a writable pointer
 * slot.
 */
enum GmhbtStatus gmhbt_edges(const struct GmhbtImage *image,
                             const struct GmhbtKernel *kernel,
                             double fraction,
                             enum GmhbtBoundaryMode boundary,
                             struct GmhbtImage **out);

/**
 * Superimposes the scaled filter response onto the image.
 *
 * # Safety
 * `image` and `kernel` must be live handles; `out` a writable pointer
 * slot.
 */
enum GmhbtStatus gmhbt_sharpen(const struct GmhbtImage *image,
                               const struct GmhbtKernel *kernel,
                               double lambda,
                               enum GmhbtBoundaryMode boundary,
                               struct GmhbtImage **out);

/**
 * Adds seeded Gaussian noise (standard deviation `sigma`, rounded and
 * clamped per pixel).
 *
 * # Safety
 * `image` must be a live handle; `out` a writable pointer slot.
 */
enum GmhbtStatus gmhbt_add_noise(const struct GmhbtImage *image,
                                 double sigma,
                                 uint64_t seed,
                                 struct GmhbtImage **out);

/**
 * Peak signal-to-noise ratio between two images of equal dimensions, in
 * decibels; identical images yield positive infinity.
 *
 * # Safety
 * `a` and `b` must be live handles; `out_db` writable.
 */
enum GmhbtStatus gmhbt_psnr(const struct GmhbtImage *a, const struct GmhbtImage *b, double *out_db);

/**
 * PSNR between the quantized high-frequency maps of the noisy and clean
 * image under the same kernel.
 *
 * # Safety
 * All handles must be live; `out_db` writable.
 */
enum GmhbtStatus gmhbt_hf_restoration_psnr(const struct GmhbtImage *original,
                                           const struct GmhbtImage *noisy,
                                           const struct GmhbtKernel *kernel,
                                           enum GmhbtQuantizeMode mode,
                                           double *out_db);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMHBT_H */
