//! Collapsing families of annular domains, the pullbacks of their harmonic
//! maps to a common cylinder, pointwise limits with convergence
//! certificates, and the bubbling detector that compares pointwise limits
//! against the set limit of the images.
//!
//! Every family is parameterized over the fixed annulus `(s, theta)` with
//! `s in [0, 1]` along the meridian. For each thickness `eps` the domain is
//! conformally a cylinder of length `L(eps)` and circumference `2 pi`; the
//! harmonic map with unit boundary circles has the profile
//! `R = cosh(x - L/2) / cosh(L/2)`, axial component `Z = x / L`, and acts
//! as the identity on the angle. As `eps` shrinks, `L` grows and the image
//! degenerates onto two unit discs joined by an axis segment; which parts
//! of that set limit the pointwise limits still cover decides bubbling.

use crate::error::{Error, Result};
use crate::geometry::{ImagePiece, ImageSet};
use crate::grid;
use serde::ser::Serializer;
use serde::Serialize;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};

/// The collapsing domain families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainFamily {
    /// Flat rectangle of height `2 pi eps`, rolled into a thin cylinder.
    FlatRectangle,
    /// Plane annulus with radii `eps` to 1.
    PlanarAnnulus,
    /// Hyperboloid meridian `r = sqrt(z^2 + eps)` collapsing onto the
    /// double cone `r = |z|`.
    DoubleCone,
    /// Round sphere minus two polar caps of angle `eps`.
    SphericalAnnulus,
    /// Two plane annuli joined by a thin tube, built so that nothing
    /// bubbles in the limit.
    AntiBubble,
}

impl std::fmt::Display for DomainFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DomainFamily::FlatRectangle => "rect",
            DomainFamily::PlanarAnnulus => "planar",
            DomainFamily::DoubleCone => "cone",
            DomainFamily::SphericalAnnulus => "sphere",
            DomainFamily::AntiBubble => "antibubble",
        })
    }
}

impl std::str::FromStr for DomainFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" => Ok(DomainFamily::FlatRectangle),
            "planar" => Ok(DomainFamily::PlanarAnnulus),
            "cone" => Ok(DomainFamily::DoubleCone),
            "sphere" => Ok(DomainFamily::SphericalAnnulus),
            "antibubble" => Ok(DomainFamily::AntiBubble),
            other => Err(Error::invalid(format!(
                "unknown family '{other}' (expected rect|planar|cone|sphere|antibubble)"
            ))),
        }
    }
}

impl Serialize for DomainFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Thickness sequence used by default throughout: three decades down.
pub const DEFAULT_EPS_SEQUENCE: [f64; 3] = [1e-3, 1e-4, 1e-5];

fn check_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    Ok(eps)
}

fn check_s(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::invalid(format!("meridian coordinate s = {s} outside [0,1]")));
    }
    Ok(s)
}

/// `log(cosh(v))` without overflow for large `|v|`.
fn logcosh(v: f64) -> f64 {
    let av = v.abs();
    av + (-2.0 * av).exp().ln_1p() - std::f64::consts::LN_2
}

/// Conformal arc element of the double-cone meridian after substituting
/// `z = sqrt(eps) * sinh t`, integrated by trapezoid between `t0` and `t1`.
fn cone_conformal_integral(t0: f64, t1: f64) -> f64 {
    if t0 == t1 {
        return 0.0;
    }
    let t = grid::linspace(t0, t1, 4001);
    let f: Vec<f64> = t
        .iter()
        .map(|&ti| {
            let th = ti.tanh();
            (1.0 + th * th).sqrt()
        })
        .collect();
    grid::trapezoid(&t, &f)
}

/// Conformal position `x(s)` along the rescaled cylinder, from the `s = 0`
/// boundary.
fn conformal_position(family: DomainFamily, eps: f64, s: f64) -> f64 {
    match family {
        DomainFamily::FlatRectangle => 2.0 * s / eps,
        DomainFamily::PlanarAnnulus => {
            let r = eps + s * (1.0 - eps);
            (r / eps).ln()
        }
        DomainFamily::DoubleCone => {
            let se = eps.sqrt();
            let t_lo = -(1.0 / se).asinh();
            let t_q = ((2.0 * s - 1.0) / se).asinh();
            cone_conformal_integral(t_lo, t_q)
        }
        DomainFamily::SphericalAnnulus => {
            let rho = eps + s * (PI - 2.0 * eps);
            (rho / 2.0).tan().ln() - (eps / 2.0).tan().ln()
        }
        DomainFamily::AntiBubble => {
            let log_len = -eps.ln();
            if s <= 1.0 / 3.0 {
                let r = 1.0 - 3.0 * s * (1.0 - eps);
                -r.ln()
            } else if s <= 2.0 / 3.0 {
                let z = 3.0 * s - 1.0;
                log_len + z / eps
            } else {
                let r = eps + (3.0 * s - 2.0) * (1.0 - eps);
                log_len + 1.0 / eps + (r / eps).ln()
            }
        }
    }
}

/// Length of the cylinder the domain becomes after the conformal rescale.
pub fn conformal_length(family: DomainFamily, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let l = match family {
        DomainFamily::FlatRectangle => 2.0 / eps,
        DomainFamily::PlanarAnnulus => -eps.ln(),
        DomainFamily::DoubleCone => conformal_position(DomainFamily::DoubleCone, eps, 1.0),
        DomainFamily::SphericalAnnulus => 2.0 * (1.0 / (eps / 2.0).tan()).ln(),
        DomainFamily::AntiBubble => {
            let lens = antibubble_lengths(eps)?;
            lens.total
        }
    };
    if !l.is_finite() {
        return Err(Error::overflow(format!("conformal length for eps = {eps}")));
    }
    Ok(l)
}

/// Conformal lengths of the anti-bubbling composite: each plane annulus
/// maps to `|log eps|`, the tube to `1 / eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntiBubbleLengths {
    pub annulus: f64,
    pub tube: f64,
    pub total: f64,
}

pub fn antibubble_lengths(eps: f64) -> Result<AntiBubbleLengths> {
    check_eps(eps)?;
    let annulus = -eps.ln();
    let tube = 1.0 / eps;
    Ok(AntiBubbleLengths {
        annulus,
        tube,
        total: 2.0 * annulus + tube,
    })
}

/// Fraction of the tube's conformal length at which the image neck sits:
/// `1 - |log eps| / (|log eps| + 1/eps)`, increasing to 1 as the tube
/// dominates.
pub fn neck_position(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let log_len = -eps.ln();
    Ok(1.0 - log_len / (log_len + 1.0 / eps))
}

/// A point of the image cylinder in radial coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapPoint {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

/// Harmonic map of the rescaled domain evaluated at `(s, theta)`: profile
/// `cosh(x - L/2)/cosh(L/2)` with unit boundary circles, normalized axial
/// component `x / L`, identity on the angle.
pub fn pullback_map(family: DomainFamily, eps: f64, s: f64, theta: f64) -> Result<MapPoint> {
    check_eps(eps)?;
    check_s(s)?;
    let l = conformal_length(family, eps)?;
    let x = conformal_position(family, eps, s);
    let r = (logcosh(x - 0.5 * l) - logcosh(0.5 * l)).exp();
    let z = x / l;
    if !r.is_finite() || !z.is_finite() {
        return Err(Error::overflow(format!("pullback at s = {s}, eps = {eps}")));
    }
    Ok(MapPoint { r, theta, z })
}

/// `s` values where the pointwise limit map is discontinuous.
pub fn limit_discontinuities(family: DomainFamily) -> &'static [f64] {
    match family {
        DomainFamily::FlatRectangle => &[0.0, 1.0],
        DomainFamily::PlanarAnnulus => &[0.0],
        DomainFamily::DoubleCone => &[0.5],
        DomainFamily::SphericalAnnulus => &[0.0, 1.0],
        DomainFamily::AntiBubble => &[],
    }
}

const EXTRAP_ATOL: f64 = 1e-9;
const AITKEN_RATIO_CUT: f64 = 0.6;
const RICHARDSON_RATIO_MAX: f64 = 0.98;
const CERTIFICATE_TOL: f64 = 2e-3;

/// Extrapolates one scalar component over the last three thicknesses,
/// using the reciprocal cylinder length as the small parameter.
///
/// Three regimes: increments already at floating-point noise keep the last
/// value; a sharply shrinking increment ratio (well under the affine-model
/// ratio) indicates geometric decay and takes an Aitken step; otherwise
/// the component is extrapolated linearly in `1/L` and certified only if
/// the two overlapping linear extrapolations agree and the increments
/// behave monotonically.
fn extrapolate_component(v: [f64; 3], l: [f64; 3]) -> (f64, bool) {
    let d1 = v[1] - v[0];
    let d2 = v[2] - v[1];
    if d1.abs() <= EXTRAP_ATOL && d2.abs() <= EXTRAP_ATOL {
        return (v[2], true);
    }
    if d1.abs() <= EXTRAP_ATOL {
        return (v[2], d2.abs() <= 10.0 * EXTRAP_ATOL);
    }
    let x = [1.0 / l[0], 1.0 / l[1], 1.0 / l[2]];
    let q = d2 / d1;
    let q_aff = (x[2] - x[1]) / (x[1] - x[0]);
    if q > 0.0 && q < AITKEN_RATIO_CUT * q_aff {
        return (v[2] + d2 * q / (1.0 - q), true);
    }
    let v23 = v[2] + d2 * x[2] / (x[1] - x[2]);
    let v12 = v[1] + d1 * x[1] / (x[0] - x[1]);
    let ok = q > 0.0 && q <= RICHARDSON_RATIO_MAX && (v23 - v12).abs() <= CERTIFICATE_TOL;
    (v23, ok)
}

/// Extrapolated limit of the pullbacks at one `(s, theta)`, with the
/// convergence certificate and the trail of successive increments.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
    /// Both components passed their certificates. A cleared flag is a
    /// divergence report, not an error: it is the expected outcome at the
    /// limit map's discontinuity loci.
    pub converged: bool,
    /// Distances between successive pullback values along the sequence.
    pub increments: Vec<f64>,
}

/// Pointwise limit of the pullback maps along a decreasing thickness
/// sequence (at least three values; the last three drive the
/// extrapolation).
pub fn pointwise_limit(
    family: DomainFamily,
    s: f64,
    theta: f64,
    eps_seq: &[f64],
) -> Result<LimitPoint> {
    if eps_seq.len() < 3 {
        return Err(Error::invalid("need at least three thicknesses"));
    }
    for w in eps_seq.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::invalid("thickness sequence must be strictly decreasing"));
        }
    }
    let mut rs = Vec::with_capacity(eps_seq.len());
    let mut zs = Vec::with_capacity(eps_seq.len());
    let mut ls = Vec::with_capacity(eps_seq.len());
    for &eps in eps_seq {
        let p = pullback_map(family, eps, s, theta)?;
        rs.push(p.r);
        zs.push(p.z);
        ls.push(conformal_length(family, eps)?);
    }
    let increments: Vec<f64> = (1..rs.len())
        .map(|i| ((rs[i] - rs[i - 1]).powi(2) + (zs[i] - zs[i - 1]).powi(2)).sqrt())
        .collect();
    let k = rs.len() - 3;
    let (r_star, r_ok) = extrapolate_component([rs[k], rs[k + 1], rs[k + 2]], [ls[k], ls[k + 1], ls[k + 2]]);
    let (z_star, z_ok) = extrapolate_component([zs[k], zs[k + 1], zs[k + 2]], [ls[k], ls[k + 1], ls[k + 2]]);
    Ok(LimitPoint {
        r: r_star,
        theta,
        z: z_star,
        converged: r_ok && z_ok,
        increments,
    })
}

/// The set limit shared by all families with unit boundary circles: unit
/// discs at both cylinder ends joined by the axis segment.
pub fn collapsed_target() -> ImageSet {
    ImageSet::new(vec![
        ImagePiece::Disc {
            center: [0.0, 0.0, 0.0],
            axis: [0.0, 0.0, 1.0],
            radius: 1.0,
        },
        ImagePiece::Disc {
            center: [0.0, 0.0, 1.0],
            axis: [0.0, 0.0, 1.0],
            radius: 1.0,
        },
        ImagePiece::Segment {
            start: [0.0, 0.0, 0.0],
            end: [0.0, 0.0, 1.0],
        },
    ])
}

/// One grid sample of the pointwise limit, flattened for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSample {
    pub s: f64,
    pub theta: f64,
    pub r: f64,
    pub z: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BubblingReport {
    pub family: DomainFamily,
    pub samples: Vec<LimitSample>,
    /// Largest distance from a set-limit point to the certified pointwise
    /// limits, measured in the meridian half-plane.
    pub graph_gap: f64,
    pub gap_threshold: f64,
    pub bubbled: bool,
    pub set_limit_mass: f64,
    pub certified_fraction: f64,
}

/// Meridian resolution used for the gap estimate, independent of the
/// report grid so coarse reports cannot hide thin bubbles.
const GAP_MERIDIAN_SAMPLES: usize = 513;

/// Compares the set limit of the images against the pointwise limits on an
/// `n_s x n_theta` grid. The part of the set limit the certified pointwise
/// limits fail to approach is the bubble; any gap above one percent of the
/// set-limit diameter flags bubbling.
pub fn detect_bubbling(
    family: DomainFamily,
    eps_seq: &[f64],
    n_s: usize,
    n_theta: usize,
) -> Result<BubblingReport> {
    if n_s < 32 || n_theta < 32 {
        return Err(Error::invalid(format!(
            "report grid {n_s}x{n_theta} too coarse, need at least 32x32"
        )));
    }
    let s_grid = grid::linspace(0.0, 1.0, n_s);
    let mut per_s = Vec::with_capacity(n_s);
    for &s in &s_grid {
        per_s.push(pointwise_limit(family, s, 0.0, eps_seq)?);
    }
    let mut samples = Vec::with_capacity(n_s * n_theta);
    for (i, &s) in s_grid.iter().enumerate() {
        for j in 0..n_theta {
            let theta = TAU * j as f64 / n_theta as f64;
            samples.push(LimitSample {
                s,
                theta,
                r: per_s[i].r,
                z: per_s[i].z,
                converged: per_s[i].converged,
            });
        }
    }
    let certified = per_s.iter().filter(|p| p.converged).count();
    let certified_fraction = certified as f64 / n_s as f64;

    // dense certified meridian cloud of the pointwise-limit image
    let mut cloud: Vec<[f64; 2]> = Vec::new();
    for &s in &grid::linspace(0.0, 1.0, GAP_MERIDIAN_SAMPLES) {
        let p = pointwise_limit(family, s, 0.0, eps_seq)?;
        if p.converged {
            cloud.push([p.r, p.z]);
        }
    }
    if cloud.is_empty() {
        return Err(Error::invalid("no certified pointwise limits on the meridian"));
    }
    let target = collapsed_target();
    let target_meridian = target.meridian_samples(257)?;
    // one-sided gap: coaxial sets compare faithfully on the meridian
    let mut graph_gap = 0.0_f64;
    for p in &target_meridian {
        let mut best = f64::INFINITY;
        for q in &cloud {
            let d = (p[0] - q[0]).hypot(p[1] - q[1]);
            if d < best {
                best = d;
            }
        }
        graph_gap = graph_gap.max(best);
    }
    // ambient diameter of the coaxial set limit via meridian antipodes
    let mut diameter = 0.0_f64;
    for a in &target_meridian {
        for b in &target_meridian {
            let d = ((a[0] + b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
            diameter = diameter.max(d);
        }
    }
    let gap_threshold = 1e-2 * diameter;
    Ok(BubblingReport {
        family,
        samples,
        graph_gap,
        gap_threshold,
        bubbled: graph_gap > gap_threshold,
        set_limit_mass: target.total_mass(),
        certified_fraction,
    })
}

/// Position of the domain point `(s, theta)` of the family as a subset of
/// three-space (the flat rectangle is rolled into its thin cylinder).
pub fn domain_position(family: DomainFamily, eps: f64, s: f64, theta: f64) -> Result<[f64; 3]> {
    check_eps(eps)?;
    check_s(s)?;
    let (ct, st) = (theta.cos(), theta.sin());
    Ok(match family {
        DomainFamily::FlatRectangle => [eps * ct, eps * st, 2.0 * s],
        DomainFamily::PlanarAnnulus => {
            let r = eps + s * (1.0 - eps);
            [r * ct, r * st, 0.0]
        }
        DomainFamily::DoubleCone => {
            let z = 2.0 * s - 1.0;
            let r = (z * z + eps).sqrt();
            [r * ct, r * st, z]
        }
        DomainFamily::SphericalAnnulus => {
            let rho = eps + s * (PI - 2.0 * eps);
            [rho.sin() * ct, rho.sin() * st, rho.cos()]
        }
        DomainFamily::AntiBubble => {
            if s <= 1.0 / 3.0 {
                let r = 1.0 - 3.0 * s * (1.0 - eps);
                [r * ct, r * st, 0.0]
            } else if s <= 2.0 / 3.0 {
                [eps * ct, eps * st, 3.0 * s - 1.0]
            } else {
                let r = eps + (3.0 * s - 2.0) * (1.0 - eps);
                [r * ct, r * st, 1.0]
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairDeviation {
    pub domain_distance: f64,
    pub image_distance: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub pairs: Vec<PairDeviation>,
    pub sup_deviation: f64,
}

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // reversed on distance: BinaryHeap pops the smallest first
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then(other.node.cmp(&self.node))
    }
}

/// Shortest path on the 8-neighbor grid graph over explicit node
/// positions, with the angular direction wrapped.
fn mesh_geodesic(
    positions: &[[f64; 3]],
    n_s: usize,
    n_theta: usize,
    from: usize,
    to: usize,
) -> f64 {
    let n = n_s * n_theta;
    debug_assert_eq!(positions.len(), n);
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[from] = 0.0;
    heap.push(HeapEntry { dist: 0.0, node: from });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        if node == to {
            return d;
        }
        if d > dist[node] {
            continue;
        }
        let (i, j) = (node / n_theta, node % n_theta);
        for di in -1i64..=1 {
            let ii = i as i64 + di;
            if ii < 0 || ii >= n_s as i64 {
                continue;
            }
            for dj in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let jj = (j as i64 + dj).rem_euclid(n_theta as i64);
                let other = ii as usize * n_theta + jj as usize;
                let (p, q) = (positions[node], positions[other]);
                let w = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2))
                    .sqrt();
                let nd = d + w;
                if nd < dist[other] {
                    dist[other] = nd;
                    heap.push(HeapEntry { dist: nd, node: other });
                }
            }
        }
    }
    dist[to]
}

fn snap(n_s: usize, n_theta: usize, s: f64, theta: f64) -> usize {
    let i = ((s * (n_s - 1) as f64).round() as usize).min(n_s - 1);
    let j = ((theta / TAU * n_theta as f64).round() as i64).rem_euclid(n_theta as i64) as usize;
    i * n_theta + j
}

/// Compares intrinsic distances in the domain against intrinsic distances
/// in the image at the smallest listed thickness. Each pair is given as
/// `((s, theta), (s, theta))`; both surfaces are meshed on the same grid,
/// so the metrication bias largely cancels in the deviation.
pub fn condition_check(
    family: DomainFamily,
    eps_seq: &[f64],
    pairs: &[[(f64, f64); 2]],
    n_s: usize,
    n_theta: usize,
) -> Result<ConditionReport> {
    if eps_seq.is_empty() {
        return Err(Error::invalid("need at least one thickness"));
    }
    if n_s < 16 || n_theta < 16 {
        return Err(Error::invalid("condition mesh needs at least 16x16 nodes"));
    }
    let eps = eps_seq.iter().cloned().fold(f64::INFINITY, f64::min);
    check_eps(eps)?;
    let s_grid = grid::linspace(0.0, 1.0, n_s);
    let mut domain_pos = Vec::with_capacity(n_s * n_theta);
    let mut image_pos = Vec::with_capacity(n_s * n_theta);
    for &s in &s_grid {
        let image_meridian = pullback_map(family, eps, s, 0.0)?;
        for j in 0..n_theta {
            let theta = TAU * j as f64 / n_theta as f64;
            domain_pos.push(domain_position(family, eps, s, theta)?);
            image_pos.push([
                image_meridian.r * theta.cos(),
                image_meridian.r * theta.sin(),
                image_meridian.z,
            ]);
        }
    }
    let mut out = Vec::with_capacity(pairs.len());
    let mut sup = 0.0_f64;
    for pair in pairs {
        let from = snap(n_s, n_theta, pair[0].0, pair[0].1);
        let to = snap(n_s, n_theta, pair[1].0, pair[1].1);
        let dd = mesh_geodesic(&domain_pos, n_s, n_theta, from, to);
        let di = mesh_geodesic(&image_pos, n_s, n_theta, from, to);
        let deviation = (dd - di).abs();
        sup = sup.max(deviation);
        out.push(PairDeviation {
            domain_distance: dd,
            image_distance: di,
            deviation,
        });
    }
    Ok(ConditionReport {
        pairs: out,
        sup_deviation: sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conformal_lengths() {
        let e3 = (-3.0_f64).exp();
        assert!((conformal_length(DomainFamily::PlanarAnnulus, e3).unwrap() - 3.0).abs() < 1e-12);
        assert!(
            (conformal_length(DomainFamily::FlatRectangle, 1e-3).unwrap() - 2000.0).abs() < 1e-9
        );
        assert!(
            (conformal_length(DomainFamily::SphericalAnnulus, 1e-3).unwrap()
                - 15.201_804_752_417_488)
                .abs()
                < 1e-12
        );
        let lens = antibubble_lengths(1e-3).unwrap();
        assert!((lens.annulus - 6.907_755_278_982_137).abs() < 1e-12);
        assert!((lens.tube - 1000.0).abs() < 1e-9);
        assert!((lens.total - (2.0 * 6.907_755_278_982_137 + 1000.0)).abs() < 1e-9);
    }

    #[test]
    fn cone_position_is_symmetric_and_complete() {
        for eps in [1e-2, 1e-3, 1e-4] {
            let l = conformal_length(DomainFamily::DoubleCone, eps).unwrap();
            let mid = conformal_position(DomainFamily::DoubleCone, eps, 0.5);
            assert!((mid - 0.5 * l).abs() < 1e-9 * l, "eps = {eps}");
            assert_eq!(conformal_position(DomainFamily::DoubleCone, eps, 0.0), 0.0);
            let full = conformal_position(DomainFamily::DoubleCone, eps, 1.0);
            assert_eq!(full, l);
        }
        let l3 = conformal_length(DomainFamily::DoubleCone, 1e-3).unwrap();
        let l4 = conformal_length(DomainFamily::DoubleCone, 1e-4).unwrap();
        assert!(l4 > l3);
    }

    #[test]
    fn pullback_boundary_rings_are_exact() {
        for family in [
            DomainFamily::FlatRectangle,
            DomainFamily::PlanarAnnulus,
            DomainFamily::DoubleCone,
            DomainFamily::SphericalAnnulus,
            DomainFamily::AntiBubble,
        ] {
            for eps in [1e-2, 1e-3] {
                let p0 = pullback_map(family, eps, 0.0, 0.3).unwrap();
                assert!((p0.r - 1.0).abs() < 1e-12, "{family} start ring");
                assert_eq!(p0.z, 0.0);
                let p1 = pullback_map(family, eps, 1.0, 0.3).unwrap();
                assert!((p1.r - 1.0).abs() < 1e-12, "{family} end ring");
                assert!((p1.z - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn planar_interior_tends_to_its_radius() {
        // fixed interior points sit at finite conformal distance from the
        // outer end, so the profile pins them near their own radius
        let p = pullback_map(DomainFamily::PlanarAnnulus, 1e-5, 0.5, 0.0).unwrap();
        assert!((p.r - 0.5).abs() < 1e-3, "r = {}", p.r);
        assert!(p.z > 0.9, "z = {}", p.z);
        let lim = pointwise_limit(DomainFamily::PlanarAnnulus, 0.5, 0.0, &DEFAULT_EPS_SEQUENCE)
            .unwrap();
        assert!(lim.converged);
        assert!((lim.r - 0.5).abs() < 5e-4, "extrapolated r = {}", lim.r);
        assert!((lim.z - 1.0).abs() < 2e-2, "extrapolated z = {}", lim.z);
    }

    #[test]
    fn cone_interior_follows_the_power_law() {
        // conformal distance from an end scales by sqrt(2) against the
        // meridian's own logarithm, giving the |z|^sqrt(2) profile radius
        let lim =
            pointwise_limit(DomainFamily::DoubleCone, 0.25, 0.0, &DEFAULT_EPS_SEQUENCE).unwrap();
        assert!(lim.converged);
        let want = 0.5_f64.powf(2.0_f64.sqrt());
        assert!((lim.r - want).abs() < 1e-3, "r = {} vs {want}", lim.r);
        assert!(lim.z.abs() < 1e-2, "z = {}", lim.z);
    }

    #[test]
    fn sphere_and_rect_match_their_tables() {
        let lim = pointwise_limit(DomainFamily::SphericalAnnulus, 0.5, 0.0, &DEFAULT_EPS_SEQUENCE)
            .unwrap();
        assert!(lim.converged);
        assert!(lim.r.abs() < 1e-6);
        assert!((lim.z - 0.5).abs() < 1e-12);
        let lim =
            pointwise_limit(DomainFamily::FlatRectangle, 0.3, 0.0, &DEFAULT_EPS_SEQUENCE).unwrap();
        assert!(lim.converged);
        assert!(lim.r.abs() < 1e-6);
        assert!((lim.z - 0.3).abs() < 1e-6);
    }

    #[test]
    fn antibubble_covers_disc_and_segment() {
        let lim = pointwise_limit(DomainFamily::AntiBubble, 1.0 / 6.0, 0.0, &DEFAULT_EPS_SEQUENCE)
            .unwrap();
        assert!(lim.converged);
        assert!((lim.r - 0.5).abs() < 1e-2, "r = {}", lim.r);
        assert!(lim.z.abs() < 1e-2, "z = {}", lim.z);
        let lim = pointwise_limit(DomainFamily::AntiBubble, 0.5, 0.0, &DEFAULT_EPS_SEQUENCE)
            .unwrap();
        assert!(lim.converged);
        assert!(lim.r.abs() < 1e-6);
        assert!((lim.z - 0.5).abs() < 1e-3);
    }

    #[test]
    fn increments_shrink_where_limits_exist() {
        let lim =
            pointwise_limit(DomainFamily::SphericalAnnulus, 0.4, 0.0, &DEFAULT_EPS_SEQUENCE)
                .unwrap();
        assert_eq!(lim.increments.len(), 2);
        assert!(lim.increments[1] < lim.increments[0]);
    }

    #[test]
    fn neck_positions() {
        for (eps, want) in [
            (1e-2, 0.955_975_692_427_056),
            (1e-3, 0.993_139_634_447_379_7),
            (1e-4, 0.999_079_813_485_902_4),
            (1e-5, 0.999_884_883_998_569_7),
            (1e-6, 0.999_986_184_680_307_7),
        ] {
            let got = neck_position(eps).unwrap();
            assert!((got - want).abs() < 1e-14, "eps = {eps}: {got}");
        }
        let mut last = 0.0;
        for k in 1..=6 {
            let v = neck_position(10f64.powi(-k)).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn rectangle_bubbles_antibubble_does_not() {
        let rect =
            detect_bubbling(DomainFamily::FlatRectangle, &DEFAULT_EPS_SEQUENCE, 32, 32).unwrap();
        assert!(rect.bubbled, "gap = {}", rect.graph_gap);
        assert!((rect.set_limit_mass - TAU).abs() < 1e-12);
        assert!(rect.certified_fraction > 0.5);
        assert_eq!(rect.samples.len(), 32 * 32);

        let anti =
            detect_bubbling(DomainFamily::AntiBubble, &DEFAULT_EPS_SEQUENCE, 32, 32).unwrap();
        assert!(!anti.bubbled, "gap = {} vs {}", anti.graph_gap, anti.gap_threshold);
        assert!(anti.certified_fraction > 0.9);
    }

    #[test]
    fn identical_meshes_have_zero_deviation() {
        let eps = 1e-2;
        let n_s = 17;
        let n_theta = 16;
        let s_grid = grid::linspace(0.0, 1.0, n_s);
        let mut pos = Vec::new();
        for &s in &s_grid {
            for j in 0..n_theta {
                let theta = TAU * j as f64 / n_theta as f64;
                pos.push(domain_position(DomainFamily::SphericalAnnulus, eps, s, theta).unwrap());
            }
        }
        let from = snap(n_s, n_theta, 0.1, 0.0);
        let to = snap(n_s, n_theta, 0.9, PI);
        let d1 = mesh_geodesic(&pos, n_s, n_theta, from, to);
        let d2 = mesh_geodesic(&pos, n_s, n_theta, from, to);
        assert_eq!(d1, d2);
        assert!(d1 > 0.0);
    }

    #[test]
    fn rect_angular_distances_deviate() {
        // boundary-ring pairs: domain circles shrink with eps while image
        // circles stay unit, so the deviation persists
        let pairs = [[(0.0, 0.0), (0.0, PI)]];
        let report =
            condition_check(DomainFamily::FlatRectangle, &[1e-2, 1e-3], &pairs, 33, 32).unwrap();
        assert!(report.sup_deviation > 1.0, "sup = {}", report.sup_deviation);
        let d = &report.pairs[0];
        assert!(d.domain_distance < 0.1);
        assert!(d.image_distance > 2.0);
    }

    #[test]
    fn antibubble_distances_converge() {
        let pairs = [
            [(0.0, 0.0), (1.0, 0.0)],
            [(0.0, 0.0), (0.5, 0.0)],
        ];
        let report =
            condition_check(DomainFamily::AntiBubble, &[1e-2, 1e-3], &pairs, 65, 32).unwrap();
        assert!(report.sup_deviation < 0.3, "sup = {}", report.sup_deviation);
    }

    #[test]
    fn family_parsing_round_trips() {
        for name in ["rect", "planar", "cone", "sphere", "antibubble"] {
            let f: DomainFamily = name.parse().unwrap();
            assert_eq!(f.to_string(), name);
        }
        assert!("torus".parse::<DomainFamily>().is_err());
    }

    #[test]
    fn input_validation() {
        assert!(pullback_map(DomainFamily::FlatRectangle, 0.0, 0.5, 0.0).is_err());
        assert!(pullback_map(DomainFamily::FlatRectangle, 1e-3, 1.5, 0.0).is_err());
        assert!(pointwise_limit(DomainFamily::FlatRectangle, 0.5, 0.0, &[1e-3, 1e-4]).is_err());
        assert!(pointwise_limit(DomainFamily::FlatRectangle, 0.5, 0.0, &[1e-3, 1e-3, 1e-4])
            .is_err());
        assert!(detect_bubbling(DomainFamily::FlatRectangle, &DEFAULT_EPS_SEQUENCE, 16, 32)
            .is_err());
    }
}
