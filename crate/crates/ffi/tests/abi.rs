//! Exercises the C ABI from Rust: handle lifecycles, error codes, and
//! agreement with the underlying library.

use std::ffi::CString;
use std::ptr;

use gmhbt_ffi::*;

fn c_path(path: &std::path::Path) -> CString {
    CString::new(path.to_str().unwrap()).unwrap()
}

#[test]
fn design_produces_a_symmetric_zero_sum_kernel() {
    unsafe {
        let spec = gmhbt_design_spec_default(5);
        assert_eq!(spec.size, 5);
        assert_eq!(spec.sigma_w, 0.7);

        let mut kernel: *mut GmhbtKernel = ptr::null_mut();
        assert_eq!(gmhbt_design(&spec, &mut kernel), GmhbtStatus::Ok);
        assert_eq!(gmhbt_kernel_size(kernel), 5);
        assert!(gmhbt_kernel_sum(kernel).abs() <= 1e-10);

        let mut coeffs = vec![0.0f64; 25];
        assert_eq!(
            gmhbt_kernel_copy_coeffs(kernel, coeffs.as_mut_ptr(), coeffs.len()),
            GmhbtStatus::Ok
        );
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(coeffs[r * 5 + c], coeffs[c * 5 + r]);
                assert_eq!(coeffs[r * 5 + c], coeffs[(4 - r) * 5 + c]);
            }
        }

        let mut small = vec![0.0f64; 10];
        assert_eq!(
            gmhbt_kernel_copy_coeffs(kernel, small.as_mut_ptr(), small.len()),
            GmhbtStatus::BufferTooSmall
        );
        gmhbt_kernel_free(kernel);
    }
}

#[test]
fn invalid_specs_and_null_pointers_are_rejected() {
    unsafe {
        let mut kernel: *mut GmhbtKernel = ptr::null_mut();
        let even = gmhbt_design_spec_default(4);
        assert_eq!(gmhbt_design(&even, &mut kernel), GmhbtStatus::InvalidArgument);
        assert_eq!(gmhbt_design(ptr::null(), &mut kernel), GmhbtStatus::NullPointer);
        assert_eq!(gmhbt_log_kernel(4, 1.0, &mut kernel), GmhbtStatus::InvalidArgument);
        assert_eq!(gmhbt_log_kernel(5, -1.0, &mut kernel), GmhbtStatus::InvalidArgument);
        assert_eq!(gmhbt_kernel_size(ptr::null()), 0);
        assert!(gmhbt_kernel_sum(ptr::null()).is_nan());

        let mut image: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_image_create(2, 2, ptr::null(), &mut image),
            GmhbtStatus::NullPointer
        );
        let msg = gmhbt_status_message(GmhbtStatus::NullPointer);
        assert!(!msg.is_null());
    }
}

#[test]
fn image_round_trip_through_pgm_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = c_path(&dir.path().join("img.pgm"));
    unsafe {
        let pixels: Vec<u8> = (0..64u32).map(|v| (v * 4) as u8).collect();
        let mut image: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_image_create(8, 8, pixels.as_ptr(), &mut image),
            GmhbtStatus::Ok
        );
        assert_eq!(gmhbt_image_save_pgm(image, path.as_ptr()), GmhbtStatus::Ok);

        let mut loaded: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_image_load_pgm(path.as_ptr(), &mut loaded),
            GmhbtStatus::Ok
        );
        assert_eq!(gmhbt_image_width(loaded), 8);
        assert_eq!(gmhbt_image_height(loaded), 8);
        let mut back = vec![0u8; 64];
        assert_eq!(
            gmhbt_image_copy_pixels(loaded, back.as_mut_ptr(), back.len()),
            GmhbtStatus::Ok
        );
        assert_eq!(back, pixels);
        gmhbt_image_free(image);
        gmhbt_image_free(loaded);
    }
}

#[test]
fn kernel_files_round_trip_and_reject_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("k.txt");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 3\n1 2 3\n").unwrap();
    unsafe {
        let spec = gmhbt_design_spec_default(5);
        let mut kernel: *mut GmhbtKernel = ptr::null_mut();
        assert_eq!(gmhbt_design(&spec, &mut kernel), GmhbtStatus::Ok);
        assert_eq!(
            gmhbt_kernel_save(kernel, c_path(&good).as_ptr()),
            GmhbtStatus::Ok
        );

        let mut reloaded: *mut GmhbtKernel = ptr::null_mut();
        assert_eq!(
            gmhbt_kernel_load(c_path(&good).as_ptr(), &mut reloaded),
            GmhbtStatus::Ok
        );
        let mut a = vec![0.0f64; 25];
        let mut b = vec![0.0f64; 25];
        gmhbt_kernel_copy_coeffs(kernel, a.as_mut_ptr(), 25);
        gmhbt_kernel_copy_coeffs(reloaded, b.as_mut_ptr(), 25);
        assert_eq!(a, b);

        let mut broken: *mut GmhbtKernel = ptr::null_mut();
        assert_eq!(
            gmhbt_kernel_load(c_path(&bad).as_ptr(), &mut broken),
            GmhbtStatus::MalformedInput
        );
        let mut missing: *mut GmhbtKernel = ptr::null_mut();
        assert_eq!(
            gmhbt_kernel_load(c_path(&dir.path().join("absent.txt")).as_ptr(), &mut missing),
            GmhbtStatus::Io
        );
        gmhbt_kernel_free(kernel);
        gmhbt_kernel_free(reloaded);
    }
}

#[test]
fn pipeline_apply_noise_psnr() {
    unsafe {
        // 32x32 vertical step image
        let pixels: Vec<u8> = (0..32 * 32)
            .map(|i| if i % 32 < 16 { 0 } else { 200 })
            .collect();
        let mut image: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_image_create(32, 32, pixels.as_ptr(), &mut image),
            GmhbtStatus::Ok
        );

        let spec = gmhbt_design_spec_default(5);
        let mut kernel: *mut GmhbtKernel = ptr::null_mut();
        assert_eq!(gmhbt_design(&spec, &mut kernel), GmhbtStatus::Ok);

        let mut response: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_apply(
                image,
                kernel,
                GmhbtQuantizeMode::Absolute,
                GmhbtBoundaryMode::Replicate,
                &mut response,
            ),
            GmhbtStatus::Ok
        );
        assert_eq!(gmhbt_image_width(response), 32);

        let mut edges: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_edges(image, kernel, 0.5, GmhbtBoundaryMode::Replicate, &mut edges),
            GmhbtStatus::Ok
        );
        assert_eq!(
            gmhbt_edges(image, kernel, 1.5, GmhbtBoundaryMode::Replicate, &mut edges),
            GmhbtStatus::InvalidArgument
        );

        let mut sharpened: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(
            gmhbt_sharpen(image, kernel, 1.0, GmhbtBoundaryMode::Replicate, &mut sharpened),
            GmhbtStatus::Ok
        );

        let mut noisy: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(gmhbt_add_noise(image, 20.0, 7, &mut noisy), GmhbtStatus::Ok);
        assert_eq!(gmhbt_add_noise(image, -1.0, 7, &mut noisy), GmhbtStatus::InvalidArgument);

        let mut db = 0.0f64;
        assert_eq!(gmhbt_psnr(image, image, &mut db), GmhbtStatus::Ok);
        assert!(db.is_infinite() && db > 0.0);
        assert_eq!(gmhbt_psnr(image, noisy, &mut db), GmhbtStatus::Ok);
        assert!(db.is_finite() && db > 0.0);

        let mut restoration = 0.0f64;
        assert_eq!(
            gmhbt_hf_restoration_psnr(
                image,
                noisy,
                kernel,
                GmhbtQuantizeMode::Absolute,
                &mut restoration,
            ),
            GmhbtStatus::Ok
        );
        assert!(restoration.is_finite());

        // mismatched dimensions surface as a status, not a crash
        let small: Vec<u8> = vec![0; 16];
        let mut tiny: *mut GmhbtImage = ptr::null_mut();
        assert_eq!(gmhbt_image_create(4, 4, small.as_ptr(), &mut tiny), GmhbtStatus::Ok);
        assert_eq!(gmhbt_psnr(image, tiny, &mut db), GmhbtStatus::DimensionMismatch);
        assert_eq!(
            gmhbt_apply(
                tiny,
                kernel,
                GmhbtQuantizeMode::Absolute,
                GmhbtBoundaryMode::Replicate,
                &mut response,
            ),
            GmhbtStatus::KernelTooLarge
        );

        for handle in [image, response, edges, sharpened, noisy, tiny] {
            gmhbt_image_free(handle);
        }
        gmhbt_kernel_free(kernel);
        gmhbt_image_free(ptr::null_mut()); // null is a no-op
    }
}
