//! Lifts of curves and surfaces to the unit sphere bundle of three-space,
//! weighted by bundle length or area, plus the varifold-style limit
//! machinery: Hausdorff distance between lifted supports, binned measures
//! with a total-variation Cauchy certificate, and a thin-neck collapse
//! detector for families of revolution surfaces.
//!
//! The lift records where mass sits *and* which direction the object
//! points, so a neck whose area vanishes genuinely disappears from the
//! limit measure instead of surviving as a phantom set.

use crate::error::{Error, Result};
use crate::geometry::RevolutionSurface;
use crate::grid;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

/// One weighted point of a lifted measure: a position, a unit direction
/// (tangent for curves, normal for surfaces), and its share of the bundle
/// length or surface area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub position: [f64; 3],
    pub direction: [f64; 3],
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LiftedMeasure {
    pub atoms: Vec<Atom>,
}

impl LiftedMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn scale(v: [f64; 3], c: f64) -> [f64; 3] {
    [v[0] * c, v[1] * c, v[2] * c]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Angle between two unit vectors, stable near zero.
fn turning_angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = norm(sub(a, b));
    (0.5 * d).clamp(-1.0, 1.0).asin() * 2.0
}

/// Lifts a polyline to the sphere bundle. Each segment becomes one atom at
/// its midpoint with its unit tangent; the weight is the bundle length
/// `sqrt(len^2 + dtheta^2)`, where `dtheta` assigns half of each
/// junction's turning angle to the two adjacent segments. Closed curves
/// wrap the junction at the seam.
pub fn lift_curve(points: &[[f64; 3]], closed: bool) -> Result<LiftedMeasure> {
    let min_pts = if closed { 3 } else { 2 };
    if points.len() < min_pts {
        return Err(Error::invalid(format!(
            "need at least {min_pts} points, got {}",
            points.len()
        )));
    }
    let n_seg = if closed { points.len() } else { points.len() - 1 };
    let mut tangents = Vec::with_capacity(n_seg);
    let mut lengths = Vec::with_capacity(n_seg);
    let mut mids = Vec::with_capacity(n_seg);
    for i in 0..n_seg {
        let p = points[i];
        let q = points[(i + 1) % points.len()];
        let d = sub(q, p);
        let len = norm(d);
        if len == 0.0 {
            return Err(Error::invalid(format!("zero-length segment at index {i}")));
        }
        tangents.push(scale(d, 1.0 / len));
        lengths.push(len);
        mids.push([
            0.5 * (p[0] + q[0]),
            0.5 * (p[1] + q[1]),
            0.5 * (p[2] + q[2]),
        ]);
    }
    // turning angle at the junction after segment i
    let junction_turn = |i: usize| -> f64 {
        if !closed && i + 1 >= n_seg {
            return 0.0;
        }
        turning_angle(tangents[i], tangents[(i + 1) % n_seg])
    };
    let mut atoms = Vec::with_capacity(n_seg);
    for i in 0..n_seg {
        let ahead = junction_turn(i);
        let behind = if i == 0 {
            if closed {
                junction_turn(n_seg - 1)
            } else {
                0.0
            }
        } else {
            junction_turn(i - 1)
        };
        let dtheta = 0.5 * (ahead + behind);
        atoms.push(Atom {
            position: mids[i],
            direction: tangents[i],
            weight: (lengths[i] * lengths[i] + dtheta * dtheta).sqrt(),
        });
    }
    Ok(LiftedMeasure { atoms })
}

/// Lifts a revolution surface to the sphere bundle: each meridian segment
/// spins into a frustum split into angular sectors, one atom per sector at
/// the sector midpoint carrying the outward unit normal and its share
/// of the frustum's lateral area.
pub fn lift_surface(surface: &RevolutionSurface, n_sectors: usize) -> Result<LiftedMeasure> {
    if surface.sphere_dim() != 1 {
        return Err(Error::invalid(
            "sphere-bundle lift is defined for circle fibers only",
        ));
    }
    if n_sectors < 3 {
        return Err(Error::invalid("need at least three sectors"));
    }
    let (z, r) = (surface.z(), surface.r());
    let mut atoms = Vec::with_capacity((z.len() - 1) * n_sectors);
    for i in 0..z.len() - 1 {
        let (dz, dr) = (z[i + 1] - z[i], r[i + 1] - r[i]);
        let slant = (dz * dz + dr * dr).sqrt();
        if slant == 0.0 {
            continue;
        }
        let panel_area = PI * (r[i] + r[i + 1]) * slant / n_sectors as f64;
        let r_mid = 0.5 * (r[i] + r[i + 1]);
        let z_mid = 0.5 * (z[i] + z[i + 1]);
        // meridian outward normal, rotated through every sector
        let (n_rad, n_ax) = (dz / slant, -dr / slant);
        for j in 0..n_sectors {
            let theta = TAU * (j as f64 + 0.5) / n_sectors as f64;
            let (ct, st) = (theta.cos(), theta.sin());
            atoms.push(Atom {
                position: [r_mid * ct, r_mid * st, z_mid],
                direction: [n_rad * ct, n_rad * st, n_ax],
                weight: panel_area,
            });
        }
    }
    Ok(LiftedMeasure { atoms })
}

/// Distance between two atoms in the product of ambient space and the
/// direction sphere (chordal on the sphere factor).
fn bundle_distance(a: &Atom, b: &Atom) -> f64 {
    let dp = sub(a.position, b.position);
    let dd = sub(a.direction, b.direction);
    (dot(dp, dp) + dot(dd, dd)).sqrt()
}

/// Symmetric Hausdorff distance between the supports of two lifted
/// measures, in the bundle metric.
pub fn hausdorff_distance(a: &LiftedMeasure, b: &LiftedMeasure) -> Result<f64> {
    if a.atoms.is_empty() || b.atoms.is_empty() {
        return Err(Error::invalid("hausdorff distance needs nonempty supports"));
    }
    let one_sided = |from: &LiftedMeasure, to: &LiftedMeasure| -> f64 {
        let mut worst = 0.0_f64;
        for p in &from.atoms {
            let mut best = f64::INFINITY;
            for q in &to.atoms {
                let d = bundle_distance(p, q);
                if d < best {
                    best = d;
                }
            }
            worst = worst.max(best);
        }
        worst
    };
    Ok(one_sided(a, b).max(one_sided(b, a)))
}

/// Position bins per bounding-box diameter.
const POSITION_BINS: f64 = 32.0;
/// Direction bins: latitude bands times longitude sectors.
const LAT_BINS: u8 = 8;
const LON_BINS: u8 = 16;

/// A measure discretized onto a fixed product grid: integer position cell
/// and latitude/longitude direction cell. The ordered map makes iteration
/// and serialization deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinnedMeasure {
    pub bins: BTreeMap<(i32, i32, i32, u8, u8), f64>,
}

impl BinnedMeasure {
    pub fn total_mass(&self) -> f64 {
        self.bins.values().sum()
    }

    fn tv_distance(&self, other: &BinnedMeasure) -> f64 {
        let mut keys: Vec<_> = self.bins.keys().chain(other.bins.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| {
                (self.bins.get(*k).copied().unwrap_or(0.0)
                    - other.bins.get(*k).copied().unwrap_or(0.0))
                .abs()
            })
            .sum()
    }
}

fn direction_cell(d: [f64; 3]) -> (u8, u8) {
    let lat = d[2].clamp(-1.0, 1.0).acos() / PI; // 0 at the north pole
    let lat_i = ((lat * LAT_BINS as f64) as i64).clamp(0, LAT_BINS as i64 - 1) as u8;
    let lon = d[1].atan2(d[0]).rem_euclid(TAU) / TAU;
    let lon_i = ((lon * LON_BINS as f64) as i64).clamp(0, LON_BINS as i64 - 1) as u8;
    (lat_i, lon_i)
}

fn bin_measure(m: &LiftedMeasure, center: [f64; 3], cell: f64) -> BinnedMeasure {
    let mut bins = BTreeMap::new();
    for a in &m.atoms {
        let (lat, lon) = direction_cell(a.direction);
        let key = (
            ((a.position[0] - center[0]) / cell).round() as i32,
            ((a.position[1] - center[1]) / cell).round() as i32,
            ((a.position[2] - center[2]) / cell).round() as i32,
            lat,
            lon,
        );
        *bins.entry(key).or_insert(0.0) += a.weight;
    }
    BinnedMeasure { bins }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureLimit {
    /// Total-variation distances between successive binned measures.
    pub tv_distances: Vec<f64>,
    /// Binned form of the final measure, on the common grid.
    pub limit: BinnedMeasure,
    /// The last two distances are non-increasing and below one percent of
    /// the final mass. Earlier distances may bounce while the support
    /// crosses cell boundaries, so only the tail certifies.
    pub converged: bool,
}

/// Bins every measure of the sequence onto one common product grid (cells
/// sized from the joint bounding box) and certifies convergence by the
/// Cauchy behavior of the total-variation distances.
pub fn measure_limit(sequence: &[LiftedMeasure]) -> Result<MeasureLimit> {
    if sequence.len() < 3 {
        return Err(Error::invalid("need at least three measures"));
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for m in sequence {
        if m.atoms.is_empty() {
            return Err(Error::invalid("empty measure in sequence"));
        }
        for a in &m.atoms {
            for k in 0..3 {
                lo[k] = lo[k].min(a.position[k]);
                hi[k] = hi[k].max(a.position[k]);
            }
        }
    }
    let center = [
        0.5 * (lo[0] + hi[0]),
        0.5 * (lo[1] + hi[1]),
        0.5 * (lo[2] + hi[2]),
    ];
    let diam = norm(sub(hi, lo));
    let cell = if diam > 0.0 { diam / POSITION_BINS } else { 1.0 };
    let binned: Vec<BinnedMeasure> = sequence.iter().map(|m| bin_measure(m, center, cell)).collect();
    let tv_distances: Vec<f64> = binned
        .windows(2)
        .map(|w| w[0].tv_distance(&w[1]))
        .collect();
    let n = tv_distances.len();
    let (prev, last) = (tv_distances[n - 2], tv_distances[n - 1]);
    let mass = binned.last().unwrap().total_mass();
    let tol = 1e-2 * mass.max(f64::MIN_POSITIVE);
    let converged = last <= prev && prev <= tol;
    Ok(MeasureLimit {
        tv_distances,
        limit: binned.last().unwrap().clone(),
        converged,
    })
}

const THIN_RADIUS_FRACTION: f64 = 0.05;
const MIN_WINDOW_EXTENT: f64 = 0.05;
const AREA_DROP_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseReport {
    /// Axial window where the final surface is thin, when one exists.
    pub window: Option<[f64; 2]>,
    /// Lateral area of each family member over that fixed window.
    pub window_areas: Vec<f64>,
    pub collapsing: bool,
}

/// Detects a collapsing neck across a family of revolution surfaces: the
/// final member must be thin (radius under five percent of its maximum)
/// over an axial window of nontrivial extent, and the family's area over
/// that fixed window must drop monotonically to under a tenth of its
/// starting value.
pub fn detect_collapse(family: &[RevolutionSurface]) -> Result<CollapseReport> {
    if family.len() < 2 {
        return Err(Error::invalid("need at least two surfaces"));
    }
    let last = family.last().unwrap();
    let (z, r) = (last.z(), last.r());
    let r_max = r.iter().cloned().fold(0.0_f64, f64::max);
    let span = z[z.len() - 1] - z[0];
    let thin: Vec<usize> = (0..r.len())
        .filter(|&i| r[i] < THIN_RADIUS_FRACTION * r_max)
        .collect();
    let window = match (thin.first(), thin.last()) {
        (Some(&a), Some(&b)) if z[b] - z[a] >= MIN_WINDOW_EXTENT * span => Some([z[a], z[b]]),
        _ => None,
    };
    let Some([w_lo, w_hi]) = window else {
        return Ok(CollapseReport {
            window: None,
            window_areas: Vec::new(),
            collapsing: false,
        });
    };
    let mut window_areas = Vec::with_capacity(family.len());
    for s in family {
        let (z, r) = (s.z(), s.r());
        if z[0] > w_lo || z[z.len() - 1] < w_hi {
            return Err(Error::invalid(
                "family member does not cover the collapse window",
            ));
        }
        let slopes = s.slopes();
        let idx: Vec<usize> = (0..z.len())
            .filter(|&i| (w_lo..=w_hi).contains(&z[i]))
            .collect();
        let zs: Vec<f64> = idx.iter().map(|&i| z[i]).collect();
        let fs: Vec<f64> = idx
            .iter()
            .map(|&i| TAU * r[i] * (1.0 + slopes[i] * slopes[i]).sqrt())
            .collect();
        window_areas.push(grid::trapezoid(&zs, &fs));
    }
    let monotone = window_areas.windows(2).all(|w| w[1] < w[0]);
    let dropped = window_areas.last().unwrap() < &(AREA_DROP_FRACTION * window_areas[0]);
    Ok(CollapseReport {
        window,
        window_areas,
        collapsing: monotone && dropped,
    })
}
