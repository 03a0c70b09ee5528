//! Exercises the C surface exactly as a C caller would: through raw
//! pointers and status codes, including the null-pointer paths.

use annulus_lab_ffi::*;
use std::f64::consts::PI;
use std::ptr;

#[test]
fn profile_roundtrip_through_the_handle() {
    unsafe {
        let mut p: *mut AnnulusProfile = ptr::null_mut();
        assert_eq!(
            annulus_profile_fit(1.0, 1.0, 1.0, &mut p),
            AnnulusStatus::Ok
        );
        assert!(!p.is_null());

        let mut r = 0.0;
        assert_eq!(annulus_profile_eval(p, -1.0, &mut r), AnnulusStatus::Ok);
        assert!((r - 1.0).abs() < 1e-15);
        assert_eq!(annulus_profile_eval(p, 0.0, &mut r), AnnulusStatus::Ok);
        assert!((r - 1.0 / 1.0_f64.cosh()).abs() < 1e-15);

        // quadrature energy sits within its documented 5e-5 relative
        // overestimate of the closed-form value
        let mut e = 0.0;
        assert_eq!(annulus_profile_energy(p, &mut e), AnnulusStatus::Ok);
        assert!((e - 22.136_845_035_829_374).abs() < 5e-5 * e);

        annulus_profile_free(p);
    }
}

#[test]
fn errors_become_status_codes_not_crashes() {
    unsafe {
        let mut p: *mut AnnulusProfile = ptr::null_mut();
        assert_eq!(
            annulus_profile_fit(-1.0, 1.0, 1.0, &mut p),
            AnnulusStatus::InvalidArgument
        );
        assert_eq!(
            annulus_profile_fit(1.0, 1.0, 1.0, ptr::null_mut()),
            AnnulusStatus::NullPointer
        );

        // construction stores coefficients only; the huge modulus
        // overflows once cosh is actually needed
        let mut v = 0.0;
        assert_eq!(
            annulus_profile_fit(1e9, 1.0, 1.0, &mut p),
            AnnulusStatus::Ok
        );
        assert_eq!(annulus_profile_eval(p, 0.0, &mut v), AnnulusStatus::Overflow);
        assert_eq!(annulus_profile_energy(p, &mut v), AnnulusStatus::Overflow);
        annulus_profile_free(p);
        p = ptr::null_mut();

        assert_eq!(
            annulus_profile_eval(ptr::null(), 0.0, &mut v),
            AnnulusStatus::NullPointer
        );
        assert_eq!(
            annulus_profile_energy(ptr::null(), &mut v),
            AnnulusStatus::NullPointer
        );

        assert_eq!(
            annulus_profile_fit(1.0, -2.0, 1.0, &mut p),
            AnnulusStatus::InvalidArgument
        );
        annulus_profile_free(ptr::null_mut());
    }
}

#[test]
fn catenoid_roots_and_counts() {
    unsafe {
        let mut roots = [0.0_f64; 2];
        let mut count = 0_usize;
        assert_eq!(
            annulus_find_catenoids(1.0, 0.4, roots.as_mut_ptr(), &mut count),
            AnnulusStatus::Ok
        );
        assert_eq!(count, 2);
        assert!((roots[0] - 0.157_962_397_210_680_93).abs() < 1e-12);
        assert!((roots[1] - 0.910_737_994_273_788).abs() < 1e-12);

        assert_eq!(
            annulus_find_catenoids(1.0, 1.0, roots.as_mut_ptr(), &mut count),
            AnnulusStatus::Ok
        );
        assert_eq!(count, 0);

        assert_eq!(
            annulus_find_catenoids(1.0, 0.4, ptr::null_mut(), &mut count),
            AnnulusStatus::NullPointer
        );
    }
}

#[test]
fn scalar_helpers() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(annulus_neck_position(1e-3, &mut v), AnnulusStatus::Ok);
        assert!((v - 0.993_139_634_447_379_7).abs() < 1e-12);
        assert_eq!(
            annulus_neck_position(2.0, &mut v),
            AnnulusStatus::InvalidArgument
        );

        let mut d = 0_u32;
        assert_eq!(annulus_moduli_dim(3, &mut d), AnnulusStatus::Ok);
        assert_eq!(d, 3);
        assert_eq!(annulus_moduli_dim(2, &mut d), AnnulusStatus::InvalidArgument);

        let mut angles = [0.0_f64; 3];
        assert_eq!(
            annulus_balance_angles(1.0, 1.0, 1.0, angles.as_mut_ptr()),
            AnnulusStatus::Ok
        );
        for a in angles {
            assert!((a - 2.0 * PI / 3.0).abs() < 1e-12);
        }
        assert_eq!(
            annulus_balance_angles(3.0, 1.0, 1.0, angles.as_mut_ptr()),
            AnnulusStatus::NotBalanced
        );
        assert_eq!(
            annulus_balance_angles(-1.0, 1.0, 1.0, angles.as_mut_ptr()),
            AnnulusStatus::InvalidArgument
        );
    }
}

#[test]
fn version_is_a_nul_terminated_static() {
    let p = annulus_version();
    assert!(!p.is_null());
    let s = unsafe { std::ffi::CStr::from_ptr(p) };
    assert_eq!(s.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
