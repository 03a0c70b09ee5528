//! Closed-form radial profiles of rotationally symmetric harmonic maps, the
//! catenoid root-finder, and the degenerate limit images at the two ends of
//! the moduli ray.
//!
//! A profile is `R(Z) = coef_even * cosh(k Z)/cosh(k) + coef_odd *
//! sinh(k Z)/sinh(k)` on `Z in [-1, 1]` with stiffness `k = n * a^(1 + 1/n)`
//! for index `n >= 1` (so `k = a^2` in the basic circle-fibre case) and a
//! constant profile for index 0. The normalizing denominators make the
//! boundary values exactly `coef_even -+ coef_odd`.

use crate::error::{Error, Result};
use crate::geometry::{ImagePiece, ImageSet, ModuliEnd, RevolutionSurface};
use crate::geometry::{ConformalClass, COSH_ARG_MAX};
use crate::grid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    a: f64,
    coef_even: f64,
    coef_odd: f64,
    index: u32,
}

impl RadialProfile {
    pub fn new(class: ConformalClass, coef_even: f64, coef_odd: f64, index: u32) -> Result<Self> {
        if !coef_even.is_finite() || !coef_odd.is_finite() {
            return Err(Error::invalid("profile coefficients must be finite"));
        }
        Ok(RadialProfile {
            a: class.a(),
            coef_even,
            coef_odd,
            index,
        })
    }

    /// Index-1 profile hitting circles of radius `r_minus` at `Z = -1` and
    /// `r_plus` at `Z = +1`.
    pub fn fit_boundary(class: ConformalClass, r_minus: f64, r_plus: f64) -> Result<Self> {
        for (name, v) in [("r_minus", r_minus), ("r_plus", r_plus)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "boundary radius {name} must be nonnegative and finite, got {v}"
                )));
            }
        }
        RadialProfile::new(
            class,
            0.5 * (r_plus + r_minus),
            0.5 * (r_plus - r_minus),
            1,
        )
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn coefficients(&self) -> (f64, f64) {
        (self.coef_even, self.coef_odd)
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Stiffness `n * a^(1 + 1/n)`; zero for the constant (index 0) profile.
    pub fn kappa(&self) -> f64 {
        match self.index {
            0 => 0.0,
            1 => self.a * self.a,
            n => n as f64 * self.a.powf(1.0 + 1.0 / n as f64),
        }
    }

    fn kappa_checked(&self) -> Result<f64> {
        let k = self.kappa();
        if k > COSH_ARG_MAX {
            return Err(Error::overflow(format!(
                "cosh({k:.3e}) exceeds f64 range (a = {})",
                self.a
            )));
        }
        Ok(k)
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if self.index == 0 {
            return Ok(self.coef_even);
        }
        let k = self.kappa_checked()?;
        let mut v = self.coef_even * ((k * z).cosh() / k.cosh());
        if self.coef_odd != 0.0 {
            v += self.coef_odd * ((k * z).sinh() / k.sinh());
        }
        if !v.is_finite() {
            return Err(Error::overflow(format!("profile value at Z = {z}")));
        }
        Ok(v)
    }

    pub fn derivative(&self, z: f64) -> Result<f64> {
        if self.index == 0 {
            return Ok(0.0);
        }
        let k = self.kappa_checked()?;
        let mut v = self.coef_even * k * ((k * z).sinh() / k.cosh());
        if self.coef_odd != 0.0 {
            v += self.coef_odd * k * ((k * z).cosh() / k.sinh());
        }
        if !v.is_finite() {
            return Err(Error::overflow(format!("profile slope at Z = {z}")));
        }
        Ok(v)
    }

    pub fn second_derivative(&self, z: f64) -> Result<f64> {
        if self.index == 0 {
            return Ok(0.0);
        }
        let k = self.kappa_checked()?;
        Ok(k * k * self.eval(z)?)
    }

    /// Residual of the index-1 profile equation `R'' = a^4 R` at `z`.
    pub fn ode_residual(&self, z: f64) -> Result<f64> {
        if self.index != 1 {
            return Err(Error::invalid("ode_residual applies to index-1 profiles"));
        }
        Ok(self.second_derivative(z)? - self.a.powi(4) * self.eval(z)?)
    }

    /// Uniform-in-Z revolution mesh of the profile. The swept sphere
    /// dimension follows the index (1 for indices 0 and 1).
    pub fn mesh(&self, n_samples: usize) -> Result<RevolutionSurface> {
        if n_samples < 3 {
            return Err(Error::invalid("mesh needs at least three samples"));
        }
        let z = grid::linspace(-1.0, 1.0, n_samples);
        let mut r = Vec::with_capacity(n_samples);
        for &zi in &z {
            let v = self.eval(zi)?;
            if v < 0.0 {
                return Err(Error::NegativeRadius { z: zi, r: v });
            }
            r.push(v);
        }
        RevolutionSurface::new(z, r, self.index.max(1))
    }
}

/// Centered finite-difference residual of `R'' = a^4 R` for sampled data,
/// at interior index `i`. Lets non-solutions expose themselves: constant
/// samples `R = 1` with `a = 1` give exactly `-1`.
pub fn sampled_ode_residual(z: &[f64], r: &[f64], a: f64, i: usize) -> Result<f64> {
    if z.len() != r.len() || z.len() < 3 {
        return Err(Error::invalid("need matching sample arrays of length >= 3"));
    }
    if i == 0 || i + 1 >= z.len() {
        return Err(Error::invalid("residual needs an interior index"));
    }
    let hs = z[i] - z[i - 1];
    let hd = z[i + 1] - z[i];
    let d2 = 2.0 * (hs * r[i + 1] - (hs + hd) * r[i] + hd * r[i - 1]) / (hs * hd * (hs + hd));
    Ok(d2 - a.powi(4) * r[i])
}

/// `c * cosh(h / c)`, saturating instead of overflowing (used only for
/// bracket comparisons, never returned).
fn catenoid_radius(c: f64, h: f64) -> f64 {
    if h / c > COSH_ARG_MAX {
        return f64::MAX;
    }
    c * (h / c).cosh()
}

/// Waist parameter solving `tanh(u) = 1/u`, the minimizer of
/// `c * cosh(h/c)` over `c` after scaling (by bisection, fully converged).
fn waist_parameter() -> f64 {
    let g = |u: f64| u.tanh() - 1.0 / u;
    let (mut lo, mut hi) = (1.0_f64, 1.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn bisect_radius(mut lo: f64, mut hi: f64, h: f64, r: f64, increasing: bool) -> f64 {
    // catenoid_radius crosses r exactly once on (lo, hi), in the stated direction
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let above = catenoid_radius(mid, h) > r;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// All waist radii `c` with `c * cosh(h / c) = r`: the catenoids spanning
/// circles of radius `r` at heights `-+ h`. Zero, one (tangency), or two
/// roots in ascending order.
pub fn find_catenoids(r: f64, h: f64) -> Result<Vec<f64>> {
    for (name, v) in [("r", r), ("h", h)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let u_star = waist_parameter();
    let c_min = h / u_star;
    let phi_min = catenoid_radius(c_min, h);
    let tol = 1e-12 * r.max(1.0);
    if phi_min > r + tol {
        return Ok(vec![]);
    }
    if phi_min >= r - tol {
        return Ok(vec![c_min]);
    }
    let mut c_lo = c_min;
    while catenoid_radius(c_lo, h) <= r {
        c_lo *= 0.5;
    }
    let left = bisect_radius(c_lo, c_min, h, r, false);
    let c_hi = 2.0 * (r + c_min);
    let right = bisect_radius(c_min, c_hi, h, r, true);
    Ok(vec![left, right])
}

/// Largest half-separation (up to `tol`) at which catenoids spanning radius
/// `r` circles still exist, located by bisection on the root count.
/// `h_lo` must admit catenoids and `h_hi` must not.
pub fn catenoid_transition(r: f64, h_lo: f64, h_hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && h_lo > 0.0 && h_hi > h_lo) {
        return Err(Error::invalid("need 0 < h_lo < h_hi and tol > 0"));
    }
    let (mut lo, mut hi) = (h_lo, h_hi);
    if find_catenoids(r, lo)?.is_empty() {
        return Err(Error::invalid("h_lo already admits no catenoid"));
    }
    if !find_catenoids(r, hi)?.is_empty() {
        return Err(Error::invalid("h_hi still admits a catenoid"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if find_catenoids(r, mid)?.is_empty() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Degenerate image at a moduli end for the profile with the given even and
/// odd coefficients (boundary radii `coef_even -+ coef_odd`).
///
/// The ruled end keeps a straight-line profile surface; the collapsed end
/// leaves the two boundary discs joined by an axis segment.
pub fn limit_profile(end: ModuliEnd, coef_even: f64, coef_odd: f64) -> Result<ImageSet> {
    let r_minus = coef_even - coef_odd;
    let r_plus = coef_even + coef_odd;
    if !(r_minus >= 0.0 && r_plus >= 0.0) || !r_minus.is_finite() || !r_plus.is_finite() {
        return Err(Error::invalid(
            "limit profile needs nonnegative finite boundary radii",
        ));
    }
    match end {
        ModuliEnd::Ruled => {
            let z = grid::linspace(-1.0, 1.0, 65);
            let r: Vec<f64> = z.iter().map(|&t| coef_even + coef_odd * t).collect();
            Ok(ImageSet::new(vec![ImagePiece::Surface(
                RevolutionSurface::new(z, r, 1)?,
            )]))
        }
        ModuliEnd::Collapsed => {
            let mut pieces = Vec::new();
            if r_minus > 0.0 {
                pieces.push(ImagePiece::Disc {
                    center: [0.0, 0.0, -1.0],
                    axis: [0.0, 0.0, 1.0],
                    radius: r_minus,
                });
            }
            if r_plus > 0.0 {
                pieces.push(ImagePiece::Disc {
                    center: [0.0, 0.0, 1.0],
                    axis: [0.0, 0.0, 1.0],
                    radius: r_plus,
                });
            }
            pieces.push(ImagePiece::Segment {
                start: [0.0, 0.0, -1.0],
                end: [0.0, 0.0, 1.0],
            });
            Ok(ImageSet::new(pieces))
        }
    }
}
