//! Conformal classes of flat annuli, their metric representatives on a fixed
//! rectangle, and the surfaces of revolution that serve as image sets.
//!
//! Every annulus here lives on the coordinate rectangle `[-1, 1] x [0, 2*pi]`
//! (angle identified mod 2*pi) carrying a diagonal constant metric
//! `diag(g_xx, g_thth)`. Because the rectangle never changes, the ratio
//! `sqrt(g_xx / g_thth)` is a complete conformal invariant and serves as the
//! modulus.

use crate::error::{Error, Result};
use crate::grid;

/// Converts between the class parameter `a` and the modulus of the standard
/// representatives: `modulus = a * MODULUS_NORMALIZATION`. Equals
/// `1 / sqrt(2 * pi)`.
pub const MODULUS_NORMALIZATION: f64 = 0.398_942_280_401_432_7;

/// Largest argument for which `cosh` stays inside `f64` range.
pub(crate) const COSH_ARG_MAX: f64 = 709.0;

/// A conformal class of flat annuli, keyed by the positive parameter `a`.
/// Small `a` is the thin (ruled) end of moduli space, large `a` the thick
/// (collapsed) end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalClass {
    a: f64,
}

impl ConformalClass {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid(format!(
                "conformal class parameter must be positive and finite, got {a}"
            )));
        }
        Ok(ConformalClass { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn modulus(&self) -> f64 {
        self.a * MODULUS_NORMALIZATION
    }
}

/// The two degenerate ends of the moduli ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuliEnd {
    /// `a -> 0`: the image degenerates to a ruled (straight-line profile)
    /// surface swept by the boundary circles.
    Ruled,
    /// `a -> infinity`: the image collapses onto the two boundary discs
    /// joined by an axis segment.
    Collapsed,
}

impl std::fmt::Display for ModuliEnd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModuliEnd::Ruled => "ruled",
            ModuliEnd::Collapsed => "collapsed",
        })
    }
}

/// Which of the two standard metric normalizations `representative` returns.
/// Both lie in the same conformal class; only the overall scale differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndHint {
    /// Scale so the angular length is fixed: `diag(a^2, 2*pi)`.
    Short,
    /// Scale so the axial length is fixed: `diag(1, 2*pi / a^2)`.
    Long,
}

/// A flat diagonal metric on the fixed rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricAnnulus {
    g_xx: f64,
    g_thth: f64,
}

impl MetricAnnulus {
    pub fn new(g_xx: f64, g_thth: f64) -> Result<Self> {
        for (name, v) in [("g_xx", g_xx), ("g_thth", g_thth)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!(
                    "metric coefficient {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(MetricAnnulus { g_xx, g_thth })
    }

    pub fn g_xx(&self) -> f64 {
        self.g_xx
    }

    pub fn g_thth(&self) -> f64 {
        self.g_thth
    }

    /// Complete conformal invariant on the fixed rectangle.
    pub fn modulus(&self) -> f64 {
        (self.g_xx / self.g_thth).sqrt()
    }

    /// Constant area density `sqrt(det g)`.
    pub fn area_element(&self) -> f64 {
        (self.g_xx * self.g_thth).sqrt()
    }

    /// Total metric area of the rectangle.
    pub fn total_area(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.area_element()
    }
}

/// Standard metric representative of the class, in one of the two
/// normalizations. Both hints give the same modulus `a / sqrt(2*pi)`.
pub fn representative(class: ConformalClass, hint: EndHint) -> Result<MetricAnnulus> {
    let a = class.a();
    let a2 = a * a;
    if !a2.is_finite() {
        return Err(Error::overflow(format!("a^2 not representable for a = {a}")));
    }
    let tau = 2.0 * std::f64::consts::PI;
    match hint {
        EndHint::Short => MetricAnnulus::new(a2, tau),
        EndHint::Long => MetricAnnulus::new(1.0, tau / a2),
    }
}

/// Surface area of the unit `n`-sphere (the fibre swept by a revolution
/// surface): 2, 2*pi, 4*pi, ... via the two-step recursion.
pub fn unit_sphere_area(n: u32) -> f64 {
    match n {
        0 => 2.0,
        1 => std::f64::consts::TAU,
        _ => std::f64::consts::TAU / (n - 1) as f64 * unit_sphere_area(n - 2),
    }
}

/// A surface of revolution sampled along its axis: radius `r[i] >= 0` at
/// height `z[i]`, swept by a sphere of dimension `sphere_dim` (1 for the
/// ordinary circle-swept surface in three-space).
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurface {
    z: Vec<f64>,
    r: Vec<f64>,
    sphere_dim: u32,
}

impl RevolutionSurface {
    pub fn new(z: Vec<f64>, r: Vec<f64>, sphere_dim: u32) -> Result<Self> {
        if z.len() != r.len() {
            return Err(Error::invalid("z and r sample lengths differ"));
        }
        if z.len() < 3 {
            return Err(Error::invalid("need at least three axial samples"));
        }
        if sphere_dim == 0 {
            return Err(Error::invalid("swept sphere dimension must be >= 1"));
        }
        for w in z.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("z samples must be strictly increasing"));
            }
        }
        for (&zi, &ri) in z.iter().zip(&r) {
            if !zi.is_finite() || !ri.is_finite() {
                return Err(Error::invalid("non-finite surface sample"));
            }
            if ri < 0.0 {
                return Err(Error::NegativeRadius { z: zi, r: ri });
            }
        }
        Ok(RevolutionSurface { z, r, sphere_dim })
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn sphere_dim(&self) -> u32 {
        self.sphere_dim
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Slope dr/dz at every node (second-order finite differences).
    pub fn slopes(&self) -> Vec<f64> {
        grid::gradient(&self.z, &self.r)
    }

    /// Surface area by trapezoid quadrature of
    /// `sigma_n * r^n * sqrt(1 + (dr/dz)^2)` over the sampled nodes.
    /// Exact for cones and cylinders sampled on uniform grids.
    pub fn area(&self) -> f64 {
        let sigma = unit_sphere_area(self.sphere_dim);
        let rz = self.slopes();
        let f: Vec<f64> = self
            .r
            .iter()
            .zip(&rz)
            .map(|(&ri, &s)| sigma * ri.powi(self.sphere_dim as i32) * (1.0 + s * s).sqrt())
            .collect();
        grid::trapezoid(&self.z, &f)
    }
}

/// One piece of a (possibly degenerate) image set.
#[derive(Debug, Clone, PartialEq)]
pub enum ImagePiece {
    Surface(RevolutionSurface),
    /// Flat disc orthogonal to `axis` through `center`.
    Disc {
        center: [f64; 3],
        axis: [f64; 3],
        radius: f64,
    },
    /// Straight segment; carries no area.
    Segment { start: [f64; 3], end: [f64; 3] },
}

impl ImagePiece {
    /// Two-dimensional mass (area) of the piece; segments carry none.
    pub fn mass(&self) -> f64 {
        match self {
            ImagePiece::Surface(s) => s.area(),
            ImagePiece::Disc { radius, .. } => std::f64::consts::PI * radius * radius,
            ImagePiece::Segment { .. } => 0.0,
        }
    }
}

/// A closed image set made of surface, disc, and segment pieces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageSet {
    pub pieces: Vec<ImagePiece>,
}

impl ImageSet {
    pub fn new(pieces: Vec<ImagePiece>) -> Self {
        ImageSet { pieces }
    }

    pub fn total_mass(&self) -> f64 {
        self.pieces.iter().map(ImagePiece::mass).sum()
    }

    /// Samples of every piece projected to the meridian half-plane `(r, z)`.
    /// Only axis-aligned pieces project faithfully, so discs must have an
    /// axial normal and segments must lie on the axis.
    pub fn meridian_samples(&self, per_piece: usize) -> Result<Vec<[f64; 2]>> {
        if per_piece < 2 {
            return Err(Error::invalid("need at least two samples per piece"));
        }
        let mut out = Vec::new();
        for piece in &self.pieces {
            match piece {
                ImagePiece::Surface(s) => {
                    let (z, r) = (s.z(), s.r());
                    if z.len() >= per_piece {
                        for (&zi, &ri) in z.iter().zip(r) {
                            out.push([ri, zi]);
                        }
                    } else {
                        // resample linearly so sparse meshes still fill the meridian
                        let zq = grid::linspace(z[0], z[z.len() - 1], per_piece);
                        let mut k = 0;
                        for &zz in &zq {
                            while k + 2 < z.len() && z[k + 1] < zz {
                                k += 1;
                            }
                            let t = (zz - z[k]) / (z[k + 1] - z[k]);
                            out.push([r[k] + t * (r[k + 1] - r[k]), zz]);
                        }
                    }
                }
                ImagePiece::Disc {
                    center,
                    axis,
                    radius,
                } => {
                    if axis[0] != 0.0 || axis[1] != 0.0 {
                        return Err(Error::invalid(
                            "meridian projection needs an axis-aligned disc",
                        ));
                    }
                    for t in grid::linspace(0.0, *radius, per_piece) {
                        out.push([t, center[2]]);
                    }
                }
                ImagePiece::Segment { start, end } => {
                    if start[0] != 0.0 || start[1] != 0.0 || end[0] != 0.0 || end[1] != 0.0 {
                        return Err(Error::invalid(
                            "meridian projection needs an axial segment",
                        ));
                    }
                    for t in grid::linspace(start[2], end[2], per_piece) {
                        out.push([0.0, t]);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn modulus_normalization_constant() {
        assert_eq!(MODULUS_NORMALIZATION, 1.0 / (2.0 * PI).sqrt());
    }

    #[test]
    fn class_rejects_bad_parameters() {
        assert!(ConformalClass::new(0.0).is_err());
        assert!(ConformalClass::new(-1.0).is_err());
        assert!(ConformalClass::new(f64::NAN).is_err());
        assert!(ConformalClass::new(f64::INFINITY).is_err());
    }

    #[test]
    fn representatives_share_the_modulus() {
        for a in [0.1, 0.5, 1.0, 2.0, 7.5] {
            let c = ConformalClass::new(a).unwrap();
            let short = representative(c, EndHint::Short).unwrap();
            let long = representative(c, EndHint::Long).unwrap();
            let want = a / (2.0 * PI).sqrt();
            assert!((short.modulus() - want).abs() <= 1e-15 * want);
            assert!((long.modulus() - want).abs() <= 1e-15 * want);
            assert!((c.modulus() - want).abs() <= 1e-15 * want);
        }
    }

    #[test]
    fn sphere_areas_match_known_values() {
        assert!((unit_sphere_area(1) - 2.0 * PI).abs() < 1e-15);
        assert!((unit_sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 2.0 * PI * PI).abs() < 1e-14);
    }

    #[test]
    fn cylinder_area_exact() {
        let z = crate::grid::linspace(-1.0, 1.0, 65);
        let r = vec![1.0; 65];
        let s = RevolutionSurface::new(z, r, 1).unwrap();
        assert!((s.area() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn cone_frustum_area_exact() {
        // line r = 2 - z/2 over z in [0, 2]: lateral area pi*(r0+r1)*slant
        let z = crate::grid::linspace(0.0, 2.0, 33);
        let r: Vec<f64> = z.iter().map(|&t| 2.0 - 0.5 * t).collect();
        let s = RevolutionSurface::new(z, r, 1).unwrap();
        let slant = (4.0f64 + 1.0).sqrt();
        let want = PI * 3.0 * slant;
        assert!((s.area() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn surface_validation() {
        assert!(RevolutionSurface::new(vec![0.0, 0.0, 1.0], vec![1.0; 3], 1).is_err());
        assert!(RevolutionSurface::new(vec![0.0, 1.0], vec![1.0; 2], 1).is_err());
        let err =
            RevolutionSurface::new(vec![0.0, 0.5, 1.0], vec![1.0, -0.1, 1.0], 1).unwrap_err();
        assert!(matches!(err, Error::NegativeRadius { .. }));
    }

    #[test]
    fn image_mass_sums_pieces() {
        let z = crate::grid::linspace(0.0, 1.0, 17);
        let cyl = RevolutionSurface::new(z, vec![1.0; 17], 1).unwrap();
        let set = ImageSet::new(vec![
            ImagePiece::Surface(cyl),
            ImagePiece::Disc {
                center: [0.0, 0.0, 0.0],
                axis: [0.0, 0.0, 1.0],
                radius: 2.0,
            },
            ImagePiece::Segment {
                start: [0.0, 0.0, 0.0],
                end: [0.0, 0.0, 1.0],
            },
        ]);
        let want = 2.0 * PI + 4.0 * PI;
        assert!((set.total_mass() - want).abs() < 1e-12);
    }

    #[test]
    fn meridian_projection_covers_pieces() {
        let set = ImageSet::new(vec![
            ImagePiece::Disc {
                center: [0.0, 0.0, 1.0],
                axis: [0.0, 0.0, 1.0],
                radius: 1.0,
            },
            ImagePiece::Segment {
                start: [0.0, 0.0, 0.0],
                end: [0.0, 0.0, 1.0],
            },
        ]);
        let pts = set.meridian_samples(9).unwrap();
        assert_eq!(pts.len(), 18);
        assert!(pts.iter().any(|p| p == &[1.0, 1.0]));
        assert!(pts.iter().any(|p| p == &[0.0, 0.0]));
        let tilted = ImageSet::new(vec![ImagePiece::Disc {
            center: [0.0; 3],
            axis: [1.0, 0.0, 0.0],
            radius: 1.0,
        }]);
        assert!(tilted.meridian_samples(9).is_err());
    }
}
