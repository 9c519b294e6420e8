//! One-dimensional quadrature helpers shared by the 3-D modules.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss-Legendre rule on [-1, 1] with `n` points, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) const PANEL_ORDER: usize = 20;

pub(crate) fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Quadrature nodes and weights on [a, b] using Gauss-Legendre panels
/// whose lengths grow geometrically away from `a`, starting at `first`.
pub(crate) fn graded_rule(a: f64, b: f64, first: f64) -> Vec<(f64, f64)> {
    let (x, w) = gl20();
    let mut breaks = vec![a];
    let len = b - a;
    if len <= 0.0 {
        return Vec::new();
    }
    let mut h = first.min(len / 2.0).max(len * 1e-12);
    let mut cur = a;
    while cur + h < b {
        cur += h;
        breaks.push(cur);
        h *= 2.0;
    }
    breaks.push(b);
    let mut out = Vec::with_capacity((breaks.len() - 1) * x.len());
    for pair in breaks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (xi, wi) in x.iter().zip(w) {
            out.push((mid + half * xi, half * wi));
        }
    }
    out
}

/// Breakpoints in the compactified variable t in [0, 1) used for the
/// improper integrals; graded towards both ends.
const T_BREAKS: [f64; 14] = [
    0.0, 1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 0.9375,
    0.96875, 1.0,
];

/// Rule for integrals over [rho, inf) with the substitution
/// s = rho + L (t / (1 - t))^2. Returns (s, ds-weight) pairs.
pub(crate) fn semi_infinite_rule(rho: f64, length_scale: f64) -> Vec<(f64, f64)> {
    let (x, w) = gl20();
    let mut out = Vec::with_capacity((T_BREAKS.len() - 1) * x.len());
    for pair in T_BREAKS.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (xi, wi) in x.iter().zip(w) {
            let t = mid + half * xi;
            let u = t / (1.0 - t);
            let s = rho + length_scale * u * u;
            let ds = length_scale * 2.0 * u / ((1.0 - t) * (1.0 - t));
            out.push((s, ds * half * wi));
        }
    }
    out
}
