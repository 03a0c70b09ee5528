//! Sweeps along the moduli ray: per-modulus energy / curvature / area rows
//! with the inequality-chain verdict, degenerate rows for the two ends,
//! energy minimization over the modulus, and extrapolated end limits.

use crate::energy::{
    check_chain, dirichlet_energy, image_curvature_functional, meridian_grid_size,
    profile_energy, stationary_metric, Extended, RadialMapSample,
};
use crate::error::{Error, Result};
use crate::geometry::{ConformalClass, ImagePiece, ImageSet, ModuliEnd};
use crate::profile::{limit_profile, RadialProfile};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Boundary circles of the annulus image: radius `r_minus` at `Z = -1`,
/// `r_plus` at `Z = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryRadii {
    pub r_minus: f64,
    pub r_plus: f64,
}

impl BoundaryRadii {
    pub fn new(r_minus: f64, r_plus: f64) -> Result<Self> {
        for (name, v) in [("r_minus", r_minus), ("r_plus", r_plus)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "boundary radius {name} must be nonnegative and finite, got {v}"
                )));
            }
        }
        if r_minus == 0.0 && r_plus == 0.0 {
            return Err(Error::invalid("both boundary circles degenerate to points"));
        }
        Ok(BoundaryRadii { r_minus, r_plus })
    }

    pub fn unit() -> Self {
        BoundaryRadii { r_minus: 1.0, r_plus: 1.0 }
    }

    fn coefficients(&self) -> (f64, f64) {
        (0.5 * (self.r_plus + self.r_minus), 0.5 * (self.r_plus - self.r_minus))
    }
}

/// One sweep record. The modulus column is extended so the degenerate rows
/// can carry `0` and `inf` without float specials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: Extended,
    pub energy: Extended,
    pub area: f64,
    pub middle: Extended,
    pub chain_holds: bool,
}

/// A sweep entry: a computed row, or a marker for moduli whose profile
/// leaves the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepEntry {
    Row(SweepRow),
    Overflow { a: f64 },
}

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return Err(Error::invalid("need 0 < lo < hi, both finite"));
    }
    if n < 2 {
        return Err(Error::invalid("need at least two sweep points"));
    }
    let mut out = crate::grid::linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect::<Vec<_>>();
    out[0] = lo;
    out[n - 1] = hi;
    Ok(out)
}

/// Image of the fitted profile for one modulus, meshed at a fixed display
/// resolution.
pub fn image_of_class(class: ConformalClass, bc: BoundaryRadii) -> Result<ImageSet> {
    let p = RadialProfile::fit_boundary(class, bc.r_minus, bc.r_plus)?;
    Ok(ImageSet::new(vec![ImagePiece::Surface(p.mesh(513)?)]))
}

/// Degenerate image at a moduli end for the given boundary circles.
pub fn limit_image(end: ModuliEnd, bc: BoundaryRadii) -> Result<ImageSet> {
    let (ce, co) = bc.coefficients();
    limit_profile(end, ce, co)
}

/// Energy carried by the collapsed-end limit: twice the mass of the two
/// boundary discs, `2 pi (r_minus^2 + r_plus^2)`. This is the value the
/// interior energies converge to as the modulus grows.
pub fn collapsed_energy_surrogate(bc: BoundaryRadii) -> f64 {
    2.0 * PI * (bc.r_minus * bc.r_minus + bc.r_plus * bc.r_plus)
}

/// Full row for one interior modulus: energy on the energy grid, curvature
/// functional and area on the finer meridian grid, chain verdict on the
/// shared mesh. Overflow anywhere turns the entry into a marker.
pub fn interior_row(class: ConformalClass, bc: BoundaryRadii) -> Result<SweepEntry> {
    let a = class.a();
    let p = RadialProfile::fit_boundary(class, bc.r_minus, bc.r_plus)?;
    let energy = match profile_energy(&p) {
        Ok(e) => e,
        Err(Error::Overflow(_)) => return Ok(SweepEntry::Overflow { a }),
        Err(e) => return Err(e),
    };
    let mesh = match p.mesh(meridian_grid_size(a)) {
        Ok(m) => m,
        Err(Error::Overflow(_)) => return Ok(SweepEntry::Overflow { a }),
        Err(e) => return Err(e),
    };
    let report = check_chain(Extended::Finite(energy), &mesh);
    Ok(SweepEntry::Row(SweepRow {
        a: Extended::Finite(a),
        energy: report.energy,
        area: 0.5 * report.twice_area,
        middle: report.middle,
        chain_holds: report.holds,
    }))
}

/// Row for the thin (ruled) end: infinite energy and curvature functional
/// over the finite-area ruled limit surface.
pub fn ruled_row(bc: BoundaryRadii) -> Result<SweepRow> {
    let image = limit_image(ModuliEnd::Ruled, bc)?;
    let area = image.total_mass();
    let middle = image_curvature_functional(&image).value;
    let energy = Extended::Infinite;
    let chain_holds = energy.ge_with_tol(middle, crate::energy::CHAIN_TOLERANCE)
        && middle.ge_with_tol(Extended::Finite(2.0 * area), crate::energy::CHAIN_TOLERANCE);
    Ok(SweepRow {
        a: Extended::Finite(0.0),
        energy,
        area,
        middle,
        chain_holds,
    })
}

/// Row for the thick (collapsed) end: the limit image is two flat discs
/// plus a massless segment, so energy, curvature functional, and twice the
/// area all equal twice the disc mass.
pub fn collapsed_row(bc: BoundaryRadii) -> Result<SweepRow> {
    let image = limit_image(ModuliEnd::Collapsed, bc)?;
    let area = image.total_mass();
    let energy = Extended::Finite(collapsed_energy_surrogate(bc));
    let middle = image_curvature_functional(&image).value;
    let chain_holds = energy.ge_with_tol(middle, crate::energy::CHAIN_TOLERANCE)
        && middle.ge_with_tol(Extended::Finite(2.0 * area), crate::energy::CHAIN_TOLERANCE);
    Ok(SweepRow {
        a: Extended::Infinite,
        energy,
        area,
        middle,
        chain_holds,
    })
}

/// Interior sweep over the given moduli, in order, computed in parallel.
pub fn sweep(a_values: &[f64], bc: BoundaryRadii) -> Result<Vec<SweepEntry>> {
    a_values
        .par_iter()
        .map(|&a| interior_row(ConformalClass::new(a)?, bc))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimizeOutcome {
    /// Strict interior minimizer of the energy over the modulus interval.
    Interior {
        a: f64,
        energy: f64,
        /// More than one descent region was seen on the scan grid, so the
        /// reported minimizer is the best bracket, not a global certificate.
        multimodal: bool,
    },
    /// No interior modulus beats the collapsed-end energy: the infimum is
    /// attained only in the limit of two flat discs.
    Collapsed { surrogate_energy: f64 },
}

/// Minimizes the map energy over moduli in `[a_lo, a_hi]` for boundary
/// circles of the given radius at heights `-+ half_gap` (rescaled
/// internally to the standard `-+ 1` gap; reported energies refer to the
/// original scale).
pub fn minimize_energy(
    radius: f64,
    half_gap: f64,
    a_lo: f64,
    a_hi: f64,
) -> Result<MinimizeOutcome> {
    for (name, v) in [("radius", radius), ("half_gap", half_gap)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let scaled = radius / half_gap;
    let scale_back = half_gap * half_gap;
    let bc = BoundaryRadii::new(scaled, scaled)?;
    let energy_at = |a: f64| -> Result<f64> {
        let p = RadialProfile::fit_boundary(ConformalClass::new(a)?, bc.r_minus, bc.r_plus)?;
        profile_energy(&p)
    };
    let grid = log_spaced(a_lo, a_hi, 65)?;
    let values: Vec<f64> = grid.iter().map(|&a| energy_at(a)).collect::<Result<_>>()?;
    let mut transitions = 0;
    let mut last_dir = 0i8;
    for w in values.windows(2) {
        let dir = if w[1] > w[0] { 1 } else { -1 };
        if last_dir != 0 && dir != last_dir {
            transitions += 1;
        }
        last_dir = dir;
    }
    let multimodal = transitions > 1;
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let (mut a_star, mut e_star) = (grid[best], values[best]);
    if best > 0 && best + 1 < grid.len() {
        // golden-section polish inside the bracketing pair
        let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (grid[best - 1], grid[best + 1]);
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let (mut fc, mut fd) = (energy_at(c)?, energy_at(d)?);
        for _ in 0..120 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = energy_at(c)?;
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = energy_at(d)?;
            }
            if hi - lo < 1e-10 * (1.0 + hi) {
                break;
            }
        }
        a_star = 0.5 * (lo + hi);
        e_star = energy_at(a_star)?;
    }
    let surrogate = collapsed_energy_surrogate(bc) * scale_back;
    let e_orig = e_star * scale_back;
    if e_orig < surrogate * (1.0 - 1e-9) {
        Ok(MinimizeOutcome::Interior {
            a: a_star,
            energy: e_orig,
            multimodal,
        })
    } else {
        Ok(MinimizeOutcome::Collapsed {
            surrogate_energy: surrogate,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySample {
    pub a: f64,
    pub energy: f64,
}

/// Limit of the energy at a moduli end.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnergyLimit {
    /// Collapsed end: Richardson extrapolation in `1/a^2` over moduli
    /// {4, 8, 16}. `low_confidence` is set when the coarse-pair
    /// extrapolation disagrees by more than five percent.
    Finite {
        value: f64,
        low_confidence: bool,
    },
    /// Ruled end: energies grow without bound as the modulus shrinks; the
    /// certificate records the samples and the fitted power of `1/a`.
    Divergent {
        samples: Vec<EnergySample>,
        exponent: f64,
        monotone: bool,
    },
}

pub fn energy_limit(end: ModuliEnd, bc: BoundaryRadii) -> Result<EnergyLimit> {
    let energy_at = |a: f64| -> Result<f64> {
        let p = RadialProfile::fit_boundary(ConformalClass::new(a)?, bc.r_minus, bc.r_plus)?;
        profile_energy(&p)
    };
    match end {
        ModuliEnd::Collapsed => {
            let (e4, e8, e16) = (energy_at(4.0)?, energy_at(8.0)?, energy_at(16.0)?);
            let fine = (4.0 * e16 - e8) / 3.0;
            let coarse = (4.0 * e8 - e4) / 3.0;
            Ok(EnergyLimit::Finite {
                value: fine,
                low_confidence: (fine - coarse).abs() > 0.05 * fine.abs(),
            })
        }
        ModuliEnd::Ruled => {
            let mut samples = Vec::new();
            for a in [0.4, 0.2, 0.1] {
                samples.push(EnergySample { a, energy: energy_at(a)? });
            }
            let monotone = samples.windows(2).all(|w| w[1].energy > w[0].energy);
            // least-squares slope of ln E against ln a
            let xs: Vec<f64> = samples.iter().map(|s| s.a.ln()).collect();
            let ys: Vec<f64> = samples.iter().map(|s| s.energy.ln()).collect();
            let n = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / n;
            let my = ys.iter().sum::<f64>() / n;
            let slope: f64 = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| (x - mx) * (y - my))
                .sum::<f64>()
                / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
            Ok(EnergyLimit::Divergent {
                samples,
                exponent: -slope,
                monotone,
            })
        }
    }
}

/// Energy of an explicitly sampled radial map in a given class (mostly for
/// comparing hand-built maps against the fitted profile).
pub fn sample_energy(class: ConformalClass, x: Vec<f64>, r: Vec<f64>, z: Vec<f64>) -> Result<f64> {
    let metric = stationary_metric(class.a())?;
    let sample = RadialMapSample::from_values(metric, x, r, z, 64)?;
    dirichlet_energy(&sample)
}
