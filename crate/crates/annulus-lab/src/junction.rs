//! Junctions of three tubes in multi-boundary limits: moduli dimension
//! counting, force-balanced Y geometry from tension triples, paths to the
//! degenerate corner of the radius octant, pinch-energy lower bounds,
//! candidate-image energy upper bounds, and convex-hull membership of
//! image pieces.

use crate::error::{Error, Result};
use crate::geometry::ImageSet;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Dimension of the moduli space of an `n`-boundary planar domain,
/// `3n - 6` for `n >= 3`. The annulus (`n = 2`) has a one-dimensional
/// moduli space handled by its own sweep machinery.
pub fn moduli_dim(n: u32) -> Result<u32> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "moduli dimension formula needs at least 3 boundary components, got {n}"
        )));
    }
    Ok(3 * n - 6)
}

/// Outcome of balancing three coplanar segment tensions at a node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BalanceOutcome {
    /// `angles[i]` is the angle between the two segments other than `i`;
    /// `directions` realize the configuration in the plane with segment 0
    /// along the positive x axis.
    Balanced {
        angles: [f64; 3],
        directions: [[f64; 2]; 3],
    },
    /// No stationary configuration: the force triangle does not close.
    NonStationary { reason: String },
}

/// Solves the force balance of three segments pulling at a node. The
/// tensions must close a triangle; the angle between two segments is the
/// supplement of the force triangle's interior angle opposite the third.
/// Equal tensions give the symmetric Y at `2 pi / 3`.
pub fn balance_angles(tensions: [f64; 3]) -> Result<BalanceOutcome> {
    for t in tensions {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::invalid(format!("tensions must be finite and >= 0, got {t}")));
        }
    }
    if tensions.contains(&0.0) {
        return Ok(BalanceOutcome::NonStationary {
            reason: "zero tension: a T-shape cannot balance nonzero forces".into(),
        });
    }
    let [t0, t1, t2] = tensions;
    if t0 > t1 + t2 || t1 > t0 + t2 || t2 > t0 + t1 {
        return Ok(BalanceOutcome::NonStationary {
            reason: format!(
                "tensions ({t0}, {t1}, {t2}) violate the triangle inequality"
            ),
        });
    }
    // interior angle of the force triangle opposite tension i
    let gamma = |i: usize, j: usize, k: usize| -> f64 {
        let c = (tensions[j] * tensions[j] + tensions[k] * tensions[k]
            - tensions[i] * tensions[i])
            / (2.0 * tensions[j] * tensions[k]);
        c.clamp(-1.0, 1.0).acos()
    };
    let angles = [PI - gamma(0, 1, 2), PI - gamma(1, 2, 0), PI - gamma(2, 0, 1)];
    // segment 0 on +x, then walk counterclockwise by the between-angles
    let phi1 = angles[2];
    let phi2 = angles[2] + angles[0];
    let directions = [
        [1.0, 0.0],
        [phi1.cos(), phi1.sin()],
        [phi2.cos(), phi2.sin()],
    ];
    Ok(BalanceOutcome::Balanced { angles, directions })
}

/// For tensions `(1, 1, tau)` the two unit segments each make this angle
/// with the axis opposite the weak segment: `2 cos(alpha) = tau`, so
/// `alpha` runs over `[pi/3, pi/2)` as `tau` drops from 1 toward 0.
pub fn opposite_axis_angle(tau: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&tau) {
        return Err(Error::invalid(format!(
            "axis angle needs a tension ratio in [0, 2], got {tau}"
        )));
    }
    Ok((tau / 2.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub direction: [f64; 3],
    pub tension: f64,
}

/// Segments of positive tension pulling at a common node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JunctionSkeleton {
    pub node: [f64; 3],
    pub segments: Vec<Segment>,
}

impl JunctionSkeleton {
    pub fn new(node: [f64; 3], segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("a junction needs at least one segment"));
        }
        let segments = segments
            .into_iter()
            .map(|s| {
                if !(s.tension > 0.0) {
                    return Err(Error::invalid(format!(
                        "tension must be positive, got {}",
                        s.tension
                    )));
                }
                let d = s.direction;
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                if n == 0.0 {
                    return Err(Error::invalid("zero direction vector"));
                }
                Ok(Segment {
                    direction: [d[0] / n, d[1] / n, d[2] / n],
                    tension: s.tension,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(JunctionSkeleton { node, segments })
    }

    /// The symmetric Y: three unit tensions at mutual angle `2 pi / 3`.
    pub fn symmetric_y(node: [f64; 3]) -> Self {
        let segments = (0..3)
            .map(|k| {
                let phi = TAU * k as f64 / 3.0;
                Segment {
                    direction: [phi.cos(), phi.sin(), 0.0],
                    tension: 1.0,
                }
            })
            .collect();
        JunctionSkeleton::new(node, segments).unwrap()
    }

    /// Two opposite segments plus a perpendicular one, all unit tension;
    /// the perpendicular pull is unbalanced.
    pub fn t_junction(node: [f64; 3]) -> Self {
        JunctionSkeleton::new(
            node,
            vec![
                Segment { direction: [1.0, 0.0, 0.0], tension: 1.0 },
                Segment { direction: [-1.0, 0.0, 0.0], tension: 1.0 },
                Segment { direction: [0.0, 1.0, 0.0], tension: 1.0 },
            ],
        )
        .unwrap()
    }

    /// Two opposite segments of equal tension: a straight line through
    /// the node, degenerately stationary.
    pub fn straight_line(node: [f64; 3]) -> Self {
        JunctionSkeleton::new(
            node,
            vec![
                Segment { direction: [0.0, 0.0, 1.0], tension: 1.0 },
                Segment { direction: [0.0, 0.0, -1.0], tension: 1.0 },
            ],
        )
        .unwrap()
    }

    /// Force balance up to `tol` times the total tension.
    pub fn is_stationary(&self, tol: f64) -> bool {
        let mut net = [0.0_f64; 3];
        let mut total = 0.0;
        for s in &self.segments {
            for (acc, d) in net.iter_mut().zip(&s.direction) {
                *acc += s.tension * d;
            }
            total += s.tension;
        }
        let n = (net[0] * net[0] + net[1] * net[1] + net[2] * net[2]).sqrt();
        n <= tol * total
    }
}

/// Tube radius as a function of the path parameter `t -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RadiusExpr {
    /// Radius `t`.
    T,
    /// Radius `k t` for a positive constant `k`.
    ScaledT(f64),
    /// Radius `t^2`, vanishing an order faster.
    TSquared,
}

impl RadiusExpr {
    fn order_and_coef(self) -> Result<(u32, f64)> {
        match self {
            RadiusExpr::T => Ok((1, 1.0)),
            RadiusExpr::ScaledT(k) => {
                if !(k > 0.0 && k.is_finite()) {
                    return Err(Error::invalid(format!("radius scale must be positive, got {k}")));
                }
                Ok((1, k))
            }
            RadiusExpr::TSquared => Ok((2, 1.0)),
        }
    }
}

impl std::str::FromStr for RadiusExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t" => Ok(RadiusExpr::T),
            "t2" | "t^2" => Ok(RadiusExpr::TSquared),
            other => {
                let coef = other
                    .strip_suffix('t')
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::invalid(format!(
                            "bad radius expression '{other}' (expected t, t2, or <scale>t)"
                        ))
                    })?;
                Ok(RadiusExpr::ScaledT(coef))
            }
        }
    }
}

/// A path in the three-tube radius octant, approaching the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModuliPath {
    pub radii: [RadiusExpr; 3],
}

/// What the junction degenerates to along a path, with tensions taken
/// proportional to the limiting radius ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PathLimit {
    /// All radii shrink at the same order: a balanced Y (possibly
    /// degenerately flat) with the surviving tension ratios.
    Junction {
        tensions: [f64; 3],
        angles: [f64; 3],
    },
    /// One tube vanishes an order faster: its pull dies and the other two
    /// straighten into a T shape.
    TSingularity { vanishing: Vec<usize> },
    /// One tube dominates every other (by order or by overwhelming
    /// ratio): the image degenerates to two segments joining the discs.
    TwoSegments { dominant: usize },
}

pub fn path_limit(path: &ModuliPath) -> Result<PathLimit> {
    let parts = [
        path.radii[0].order_and_coef()?,
        path.radii[1].order_and_coef()?,
        path.radii[2].order_and_coef()?,
    ];
    let min_order = parts.iter().map(|p| p.0).min().unwrap();
    let vanishing: Vec<usize> = (0..3).filter(|&i| parts[i].0 > min_order).collect();
    match vanishing.len() {
        1 => return Ok(PathLimit::TSingularity { vanishing }),
        2 => {
            let dominant = (0..3).find(|i| !vanishing.contains(i)).unwrap();
            return Ok(PathLimit::TwoSegments { dominant });
        }
        _ => {}
    }
    let min_coef = parts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let tensions = [
        parts[0].1 / min_coef,
        parts[1].1 / min_coef,
        parts[2].1 / min_coef,
    ];
    match balance_angles(tensions)? {
        BalanceOutcome::Balanced { angles, .. } => Ok(PathLimit::Junction { tensions, angles }),
        BalanceOutcome::NonStationary { .. } => {
            let dominant = (0..3)
                .max_by(|&a, &b| tensions[a].partial_cmp(&tensions[b]).unwrap())
                .unwrap();
            Ok(PathLimit::TwoSegments { dominant })
        }
    }
}

/// Energy a map must pay to keep a radius-`eps` tube of the given length
/// unpinched while its image stays at unit scale: the density is at least
/// `1/eps^2` over the tube's lateral area `2 pi eps L`, so the bound is
/// `2 pi L / eps`. A pinched tube costs nothing.
pub fn pinch_energy_bound(eps: f64, tube_length: f64, pinched: bool) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    if tube_length < 0.0 {
        return Err(Error::invalid(format!("tube length must be >= 0, got {tube_length}")));
    }
    if pinched {
        return Ok(0.0);
    }
    Ok(TAU * tube_length / eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateBound {
    pub twice_area: f64,
    /// Tube and joint-ball correction, vanishing linearly in `eps`.
    pub correction: f64,
    pub total: f64,
}

/// Upper bound for the least energy over maps spanning the given boundary
/// data: twice the sum of the minimal disc areas, plus twice the area of
/// the connecting radius-`eps` tubes and the joint ball of radius `2 eps`.
pub fn candidate_energy_upper(
    minimal_areas: &[f64],
    eps: f64,
    tube_lengths: &[f64],
) -> Result<CandidateBound> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    if minimal_areas.iter().chain(tube_lengths).any(|v| *v < 0.0) {
        return Err(Error::invalid("areas and tube lengths must be >= 0"));
    }
    let twice_area = 2.0 * minimal_areas.iter().sum::<f64>();
    let tube_sum: f64 = tube_lengths.iter().map(|l| PI * eps * l).sum();
    let correction = 2.0 * (tube_sum + PI * (2.0 * eps) * (2.0 * eps));
    Ok(CandidateBound {
        twice_area,
        correction,
        total: twice_area + correction,
    })
}

/// Convex hull of coaxial rings `(radius, z)` in the meridian half-plane:
/// a point is inside iff it lies in the planar hull of the mirrored ring
/// points. Returns the hull as an upper radius envelope over `z`.
struct RingHull {
    // hull vertices of {(+-r_k, z_k)} sorted by z on the upper chain
    chain: Vec<[f64; 2]>,
    z_lo: f64,
    z_hi: f64,
}

impl RingHull {
    fn new(rings: &[(f64, f64)]) -> Result<Self> {
        if rings.len() < 2 {
            return Err(Error::invalid("hull needs at least two rings"));
        }
        for &(r, _) in rings {
            if r < 0.0 {
                return Err(Error::invalid(format!("ring radius must be >= 0, got {r}")));
            }
        }
        let mut pts: Vec<[f64; 2]> = rings.iter().map(|&(r, z)| [z, r]).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // upper concave chain of (z, r): by symmetry the full planar hull
        // of the mirrored points is this chain and its reflection
        let mut chain: Vec<[f64; 2]> = Vec::new();
        for p in pts.iter().cloned() {
            while chain.len() >= 2 {
                let a = chain[chain.len() - 2];
                let b = chain[chain.len() - 1];
                let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
                if cross >= 0.0 {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(p);
        }
        Ok(RingHull {
            z_lo: pts[0][0],
            z_hi: pts[pts.len() - 1][0],
            chain,
        })
    }

    fn envelope(&self, z: f64) -> f64 {
        match self
            .chain
            .windows(2)
            .find(|w| (w[0][0]..=w[1][0]).contains(&z))
        {
            Some(w) => {
                if w[1][0] == w[0][0] {
                    w[0][1].max(w[1][1])
                } else {
                    let t = (z - w[0][0]) / (w[1][0] - w[0][0]);
                    w[0][1] + t * (w[1][1] - w[0][1])
                }
            }
            None => self.chain.last().unwrap()[1],
        }
    }

    fn contains(&self, r: f64, z: f64, tol: f64) -> bool {
        z >= self.z_lo - tol && z <= self.z_hi + tol && r <= self.envelope(z) + tol
    }
}

/// Checks that every sampled point of the image lies in the convex hull
/// of the given coaxial rings (a boundary circle and the neck circle,
/// typically). Sampling happens in the meridian half-plane, so all pieces
/// must be coaxial.
pub fn convex_hull_check(image: &ImageSet, rings: &[(f64, f64)]) -> Result<bool> {
    let hull = RingHull::new(rings)?;
    let samples = image.meridian_samples(129)?;
    let scale = rings
        .iter()
        .map(|&(r, z)| r.abs().max(z.abs()))
        .fold(1.0_f64, f64::max);
    let tol = 1e-9 * scale;
    Ok(samples.iter().all(|&[r, z]| hull.contains(r, z, tol)))
}
