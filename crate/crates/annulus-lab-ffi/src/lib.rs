//! C ABI over the annulus-lab core: opaque profile handles plus a handful
//! of free functions, every fallible call reporting through
//! [`AnnulusStatus`] and writing results via out-pointers.
//!
//! Ownership rules are the usual ones for handle APIs: whatever
//! `annulus_profile_fit` hands out must go back through
//! `annulus_profile_free` exactly once; all other pointers are borrowed for
//! the duration of the call. Passing null where a non-null pointer is
//! expected yields `NullPointer`, never a crash.

use annulus_lab::bubbling::neck_position;
use annulus_lab::energy::profile_energy;
use annulus_lab::error::Error;
use annulus_lab::geometry::ConformalClass;
use annulus_lab::junction::{balance_angles, moduli_dim, BalanceOutcome};
use annulus_lab::profile::{find_catenoids, RadialProfile};
use std::os::raw::c_char;

/// Status code of every fallible call. `Ok` is zero so the C side can test
/// `if (annulus_...(...))` for failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnulusStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of the documented domain.
    InvalidArgument = 2,
    /// The computation left the representable range of `double`.
    Overflow = 3,
    /// A numeric search failed to bracket or converge.
    RootFinding = 4,
    /// The requested configuration exists but is not stationary
    /// (tension triple violating the strict triangle inequality).
    NotBalanced = 5,
}

fn status_of(e: &Error) -> AnnulusStatus {
    match e {
        Error::InvalidArgument(_) => AnnulusStatus::InvalidArgument,
        Error::Overflow(_) => AnnulusStatus::Overflow,
        Error::NegativeRadius { .. } => AnnulusStatus::InvalidArgument,
        Error::UndefinedCurvature { .. } => AnnulusStatus::InvalidArgument,
        Error::RootFinding(_) => AnnulusStatus::RootFinding,
    }
}

/// Opaque radial profile handle. Create with `annulus_profile_fit`,
/// release with `annulus_profile_free`.
pub struct AnnulusProfile {
    inner: RadialProfile,
}

/// Fits the closed-form radial profile with modulus parameter `a` through
/// boundary radii `r_minus` (at Z = -1) and `r_plus` (at Z = +1) and
/// writes a heap-allocated handle to `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn annulus_profile_fit(
    a: f64,
    r_minus: f64,
    r_plus: f64,
    out: *mut *mut AnnulusProfile,
) -> AnnulusStatus {
    if out.is_null() {
        return AnnulusStatus::NullPointer;
    }
    let class = match ConformalClass::new(a) {
        Ok(c) => c,
        Err(e) => return status_of(&e),
    };
    match RadialProfile::fit_boundary(class, r_minus, r_plus) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(AnnulusProfile { inner: p }));
            AnnulusStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Evaluates the profile radius at `z` in [-1, 1] into `*out`.
///
/// # Safety
/// `profile` must come from `annulus_profile_fit` and not yet be freed;
/// `out` must be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn annulus_profile_eval(
    profile: *const AnnulusProfile,
    z: f64,
    out: *mut f64,
) -> AnnulusStatus {
    if profile.is_null() || out.is_null() {
        return AnnulusStatus::NullPointer;
    }
    match (*profile).inner.eval(z) {
        Ok(v) => {
            *out = v;
            AnnulusStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Dirichlet energy of the profile under its stationary metric, into `*out`.
///
/// # Safety
/// Same pointer contract as [`annulus_profile_eval`].
#[no_mangle]
pub unsafe extern "C" fn annulus_profile_energy(
    profile: *const AnnulusProfile,
    out: *mut f64,
) -> AnnulusStatus {
    if profile.is_null() || out.is_null() {
        return AnnulusStatus::NullPointer;
    }
    match profile_energy(&(*profile).inner) {
        Ok(v) => {
            *out = v;
            AnnulusStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a profile handle. Null is accepted and ignored.
///
/// # Safety
/// `profile` must be null or a handle from `annulus_profile_fit` that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn annulus_profile_free(profile: *mut AnnulusProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Finds waist parameters `c` solving `c cosh(h/c) = r`. Writes up to two
/// ascending roots into `roots` and their count (0, 1, or 2) into `*count`.
/// Zero roots is a success: the boundary rings admit no such surface.
///
/// # Safety
/// `roots` must be valid for two `double`s, `count` for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn annulus_find_catenoids(
    r: f64,
    h: f64,
    roots: *mut f64,
    count: *mut usize,
) -> AnnulusStatus {
    if roots.is_null() || count.is_null() {
        return AnnulusStatus::NullPointer;
    }
    match find_catenoids(r, h) {
        Ok(found) => {
            for (i, c) in found.iter().enumerate() {
                *roots.add(i) = *c;
            }
            *count = found.len();
            AnnulusStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Meridian position of the thinnest point of the antibubble family at
/// thickness `eps`, into `*out`.
///
/// # Safety
/// `out` must be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn annulus_neck_position(eps: f64, out: *mut f64) -> AnnulusStatus {
    if out.is_null() {
        return AnnulusStatus::NullPointer;
    }
    match neck_position(eps) {
        Ok(v) => {
            *out = v;
            AnnulusStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Dimension of the space of stationary configurations with `n` boundary
/// circles (n >= 3), into `*out`.
///
/// # Safety
/// `out` must be valid for one `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn annulus_moduli_dim(n: u32, out: *mut u32) -> AnnulusStatus {
    if out.is_null() {
        return AnnulusStatus::NullPointer;
    }
    match moduli_dim(n) {
        Ok(v) => {
            *out = v;
            AnnulusStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Angles between consecutive segments of the stationary triple junction
/// with tensions `(t1, t2, t3)`, written to `angles[0..3]` in radians.
/// Returns `NotBalanced` (without touching `angles`) when no stationary
/// junction exists for these tensions.
///
/// # Safety
/// `angles` must be valid for three `double`s.
#[no_mangle]
pub unsafe extern "C" fn annulus_balance_angles(
    t1: f64,
    t2: f64,
    t3: f64,
    angles: *mut f64,
) -> AnnulusStatus {
    if angles.is_null() {
        return AnnulusStatus::NullPointer;
    }
    match balance_angles([t1, t2, t3]) {
        Ok(BalanceOutcome::Balanced { angles: a, .. }) => {
            for (i, v) in a.iter().enumerate() {
                *angles.add(i) = *v;
            }
            AnnulusStatus::Ok
        }
        Ok(BalanceOutcome::NonStationary { .. }) => AnnulusStatus::NotBalanced,
        Err(e) => status_of(&e),
    }
}

/// Library version as a static NUL-terminated string; never free it.
#[no_mangle]
pub extern "C" fn annulus_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
