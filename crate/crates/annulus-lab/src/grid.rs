//! Small shared helpers for sampled 1-D data: uniform grids, trapezoid
//! quadrature, and second-order finite differences on possibly non-uniform
//! strictly increasing grids.

/// `n` evenly spaced values from `a` to `b` inclusive. Endpoints are exact.
pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (b - a) / (n - 1) as f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a + step * i as f64);
    }
    out[n - 1] = b;
    out
}

pub(crate) fn trapezoid(x: &[f64], f: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), f.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    }
    acc
}

/// First derivative at every node, second-order accurate: three-point
/// one-sided stencils at the ends, centered (non-uniform aware) inside.
pub(crate) fn gradient(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    debug_assert_eq!(n, f.len());
    debug_assert!(n >= 3, "gradient needs at least three nodes");
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let hs = x[i] - x[i - 1];
        let hd = x[i + 1] - x[i];
        out[i] = (hs * hs * f[i + 1] + (hd * hd - hs * hs) * f[i] - hd * hd * f[i - 1])
            / (hs * hd * (hs + hd));
    }
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1]
        - h1 / (h2 * (h1 + h2)) * f[2];
    let (g1, g2) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    out[n - 1] = g2 / (g1 * (g1 + g2)) * f[n - 3] - (g1 + g2) / (g1 * g2) * f[n - 2]
        + (2.0 * g2 + g1) / (g2 * (g1 + g2)) * f[n - 1];
    out
}

/// Second derivative from the three-point stencil at interior nodes; the
/// end values are copied from their interior neighbours.
pub(crate) fn second_derivative(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    debug_assert!(n >= 3);
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let hs = x[i] - x[i - 1];
        let hd = x[i + 1] - x[i];
        out[i] = 2.0 * (hs * f[i + 1] - (hs + hd) * f[i] + hd * f[i - 1])
            / (hs * hd * (hs + hd));
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    out
}
