//! Confocal ellipsoids: the ellipsoidal coordinate, the one-dimensional
//! integrals that define their potentials, and explicit solutions of the
//! over-determined shell problem
//!
//!   Delta w = 1 in the shell, grad w = 0 on the outer surface,
//!   grad w = A x + b on the inner surface.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quad::{graded_rule, semi_infinite_rule};

const COORD_TOL: f64 = 1e-12;

fn check_axes(c2: &[f64; 3]) -> Result<()> {
    if c2.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid(format!("squared semi-axes must be positive, got {c2:?}")));
    }
    Ok(())
}

/// g(rho) = prod_j (c_j^2 + rho)
pub fn g(rho: f64, c2: &[f64; 3]) -> f64 {
    c2.iter().map(|c| c + rho).product()
}

/// The rho >= 0 with sum x_j^2 / (c_j^2 + rho) = 1 for x outside the
/// ellipsoid sum x_j^2 / c_j^2 = 1.
pub fn ellipsoidal_coordinate(x: [f64; 3], c2: &[f64; 3]) -> Result<f64> {
    check_axes(c2)?;
    let q = |rho: f64| -> f64 { (0..3).map(|j| x[j] * x[j] / (c2[j] + rho)).sum() };
    let q0 = q(0.0);
    if q0 < 1.0 - COORD_TOL {
        return Err(Error::InsideCore(q0));
    }
    if q0 <= 1.0 {
        return Ok(0.0);
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let cmax = c2.iter().cloned().fold(0.0, f64::max);
    let mut lo = (r2 - cmax).max(0.0);
    let mut hi = r2;
    // q is decreasing and convex: Newton from the left endpoint never overshoots
    let mut rho = lo;
    for _ in 0..200 {
        let f = q(rho) - 1.0;
        if f > 0.0 {
            lo = lo.max(rho);
        } else {
            hi = hi.min(rho);
        }
        let df: f64 = -(0..3).map(|j| x[j] * x[j] / ((c2[j] + rho) * (c2[j] + rho))).sum::<f64>();
        let mut next = rho - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - rho).abs() <= 1e-16 * rho.max(1e-300) || hi - lo <= 1e-16 * hi {
            rho = next;
            break;
        }
        rho = next;
    }
    Ok(rho)
}

/// g(rho), phi_j(rho) = int_rho^inf ds / ((c_j^2+s) sqrt g(s)) and
/// I(rho) = int_rho^inf g(s)^{-1/2} ds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidIntegrals {
    pub g: f64,
    pub phi: [f64; 3],
    pub i: f64,
}

pub fn ellipsoid_integrals(rho: f64, c2: &[f64; 3]) -> Result<EllipsoidIntegrals> {
    check_axes(c2)?;
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(invalid(format!("rho must be non-negative, got {rho}")));
    }
    let scale = g(rho, c2).cbrt();
    let mut phi = [0.0; 3];
    let mut i = 0.0;
    for (s, w) in semi_infinite_rule(rho, scale) {
        let a = [c2[0] + s, c2[1] + s, c2[2] + s];
        let inv_sqrt_g = 1.0 / (a[0] * a[1] * a[2]).sqrt();
        let wg = w * inv_sqrt_g;
        i += wg;
        for j in 0..3 {
            phi[j] += wg / a[j];
        }
    }
    Ok(EllipsoidIntegrals { g: g(rho, c2), phi, i })
}

/// int_0^rho0 ds / ((c_j^2+s) sqrt g(s)), j = 1..3.
fn inner_integrals(rho0: f64, c2: &[f64; 3]) -> [f64; 3] {
    let cmin = c2.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut out = [0.0; 3];
    for (s, w) in graded_rule(0.0, rho0, 0.25 * cmin) {
        let a = [c2[0] + s, c2[1] + s, c2[2] + s];
        let wg = w / (a[0] * a[1] * a[2]).sqrt();
        for j in 0..3 {
            out[j] += wg / a[j];
        }
    }
    out
}

/// alpha_j = -(1/4) int_0^rho0 sqrt(g(rho0)) / ((c_j^2+s) sqrt g(s)) ds.
pub fn alpha_coefficients(rho0: f64, c2: &[f64; 3]) -> Result<[f64; 3]> {
    check_axes(c2)?;
    if !(rho0 >= 0.0 && rho0.is_finite()) {
        return Err(invalid(format!("rho0 must be non-negative, got {rho0}")));
    }
    let sg = g(rho0, c2).sqrt();
    Ok(inner_integrals(rho0, c2).map(|v| -0.25 * sg * v))
}

/// Core ellipsoid sum x_j^2/c_j^2 = 1 and the confocal shell at rho = rho0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipsoidPair {
    pub c2: [f64; 3],
    pub rho0: f64,
}

impl EllipsoidPair {
    pub fn new(c2: [f64; 3], rho0: f64) -> Result<Self> {
        let p = Self { c2, rho0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_axes(&self.c2)?;
        if !(self.rho0 > 0.0 && self.rho0.is_finite()) {
            return Err(invalid(format!("rho0 must be positive, got {}", self.rho0)));
        }
        Ok(())
    }

    pub fn core_volume(&self) -> f64 {
        4.0 * PI / 3.0 * g(0.0, &self.c2).sqrt()
    }

    pub fn shell_volume(&self) -> f64 {
        4.0 * PI / 3.0 * g(self.rho0, &self.c2).sqrt()
    }

    /// f = |D| / |Omega|
    pub fn volume_fraction(&self) -> f64 {
        (g(0.0, &self.c2) / g(self.rho0, &self.c2)).sqrt()
    }

    pub fn shell_axes2(&self) -> [f64; 3] {
        self.c2.map(|c| c + self.rho0)
    }

    /// Largest shell semi-axis.
    pub fn scale(&self) -> f64 {
        self.shell_axes2().iter().cloned().fold(0.0, f64::max).sqrt()
    }
}

/// Geometry of an explicit solution to the shell problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OdpGeometry {
    Confocal(EllipsoidPair),
    Balls { r_i: f64, r_e: f64 },
}

impl OdpGeometry {
    /// Same-shape ellipsoid data for either variant.
    pub fn as_pair(&self) -> EllipsoidPair {
        match *self {
            OdpGeometry::Confocal(p) => p,
            OdpGeometry::Balls { r_i, r_e } => EllipsoidPair { c2: [r_i * r_i; 3], rho0: r_e * r_e - r_i * r_i },
        }
    }
}

/// A candidate solution whose residuals can be checked.
pub trait OdpCandidate {
    fn value(&self, x: [f64; 3]) -> f64;
    fn gradient(&self, x: [f64; 3]) -> [f64; 3];
    /// Diagonal of A and the vector b of the inner boundary condition.
    fn affine(&self) -> ([f64; 3], [f64; 3]);
}

/// Explicit solution for confocal ellipsoids or concentric balls.
///
/// The confocal potential is normalized so that Delta w = 1, i.e. scaled
/// by sqrt(g(rho0))/2 relative to the bare integral formula.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdpSolution {
    pub geometry: OdpGeometry,
    pub a: [f64; 3],
    pub b: [f64; 3],
    #[serde(skip)]
    phi_outer: [f64; 3],
    #[serde(skip)]
    norm: f64,
}

/// Value, analytic gradient and A at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdpPoint {
    pub w: f64,
    pub grad: [f64; 3],
}

impl OdpSolution {
    pub fn new(geometry: OdpGeometry) -> Result<Self> {
        match geometry {
            OdpGeometry::Confocal(pair) => {
                pair.validate()?;
                let outer = ellipsoid_integrals(pair.rho0, &pair.c2)?;
                let inner = inner_integrals(pair.rho0, &pair.c2);
                let norm = 0.5 * outer.g.sqrt();
                Ok(Self {
                    geometry,
                    a: inner.map(|v| -norm * v),
                    b: [0.0; 3],
                    phi_outer: outer.phi,
                    norm,
                })
            }
            OdpGeometry::Balls { r_i, r_e } => {
                if !(r_i > 0.0 && r_e > r_i && r_e.is_finite()) {
                    return Err(invalid(format!("need 0 < r_i < r_e, got {r_i}, {r_e}")));
                }
                let a = (1.0 - (r_e / r_i).powi(3)) / 3.0;
                Ok(Self { geometry, a: [a; 3], b: [0.0; 3], phi_outer: [0.0; 3], norm: 1.0 })
            }
        }
    }

    /// w and its gradient at x in the closed shell.
    pub fn eval(&self, x: [f64; 3]) -> Result<OdpPoint> {
        match self.geometry {
            OdpGeometry::Confocal(pair) => {
                let rho = ellipsoidal_coordinate(x, &pair.c2)?;
                if rho > pair.rho0 * (1.0 + 1e-10) {
                    return Err(Error::OutsideShell(format!("rho = {rho} > rho0 = {}", pair.rho0)));
                }
                let e = ellipsoid_integrals(rho, &pair.c2)?;
                let mut w = 0.5 * e.i;
                let mut grad = [0.0; 3];
                for j in 0..3 {
                    w += 0.5 * (self.phi_outer[j] - e.phi[j]) * x[j] * x[j];
                    grad[j] = self.norm * (self.phi_outer[j] - e.phi[j]) * x[j];
                }
                Ok(OdpPoint { w: self.norm * w, grad })
            }
            OdpGeometry::Balls { r_i, r_e } => {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                if r < r_i * (1.0 - 1e-12) {
                    return Err(Error::InsideCore(r / r_i));
                }
                if r > r_e * (1.0 + 1e-12) {
                    return Err(Error::OutsideShell(format!("|x| = {r} > r_e = {r_e}")));
                }
                let w = r_e.powi(3) / (3.0 * r) + r * r / 6.0;
                let s = -r_e.powi(3) / (3.0 * r.powi(3)) + 1.0 / 3.0;
                Ok(OdpPoint { w, grad: x.map(|v| s * v) })
            }
        }
    }
}

impl OdpCandidate for OdpSolution {
    fn value(&self, x: [f64; 3]) -> f64 {
        self.eval(x).map(|p| p.w).unwrap_or(f64::NAN)
    }

    fn gradient(&self, x: [f64; 3]) -> [f64; 3] {
        self.eval(x).map(|p| p.grad).unwrap_or([f64::NAN; 3])
    }

    fn affine(&self) -> ([f64; 3], [f64; 3]) {
        (self.a, self.b)
    }
}

/// Explicit solution of the shell problem for `geometry`.
pub fn odp_w(geometry: OdpGeometry) -> Result<OdpSolution> {
    OdpSolution::new(geometry)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdpResidual {
    pub laplacian_residual: f64,
    pub outer_grad_max: f64,
    pub inner_affine_residual: f64,
    pub samples: usize,
}

/// Point on the confocal surface rho = const with unit-sphere direction omega.
fn surface_point(c2: &[f64; 3], rho: f64, omega: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|j| (c2[j] + rho).sqrt() * omega[j])
}

fn sphere_grid(m: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(m * 2 * m);
    for i in 0..m {
        let theta = PI * (i as f64 + 0.5) / m as f64;
        for k in 0..2 * m {
            let phi = PI * k as f64 / m as f64;
            out.push([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
        }
    }
    out
}

/// Residuals of a candidate: max |Delta_h w - 1| at random shell points,
/// max |grad w| on the outer surface and max |grad w - (A x + b)| on the
/// inner surface. Sampling is seeded, so the result is reproducible.
pub fn odp_residual(candidate: &impl OdpCandidate, pair: &EllipsoidPair, n_samples: usize, seed: u64) -> OdpResidual {
    let c2 = pair.c2;
    let h = 1e-4 * pair.scale();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lap: f64 = 0.0;
    for _ in 0..n_samples {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let t: f64 = rng.gen_range(0.0..2.0 * PI);
        let s = (1.0 - z * z).sqrt();
        let omega = [s * t.cos(), s * t.sin(), z];
        let rho = pair.rho0 * rng.gen_range(0.1..0.9);
        let x = surface_point(&c2, rho, omega);
        let w0 = candidate.value(x);
        let mut acc = -6.0 * w0;
        for j in 0..3 {
            let mut xp = x;
            xp[j] += h;
            let mut xm = x;
            xm[j] -= h;
            acc += candidate.value(xp) + candidate.value(xm);
        }
        lap = lap.max((acc / (h * h) - 1.0).abs());
    }
    let m = ((n_samples as f64).sqrt().ceil() as usize).max(8);
    let grid = sphere_grid(m);
    let mut outer: f64 = 0.0;
    let mut inner: f64 = 0.0;
    let (a, b) = candidate.affine();
    for &omega in &grid {
        let x = surface_point(&c2, pair.rho0, omega);
        let gr = candidate.gradient(x);
        outer = outer.max((gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2]).sqrt());
        let x = surface_point(&c2, 0.0, omega);
        let gr = candidate.gradient(x);
        let d: f64 = (0..3).map(|j| (gr[j] - a[j] * x[j] - b[j]).powi(2)).sum();
        inner = inner.max(d.sqrt());
    }
    OdpResidual { laplacian_residual: lap, outer_grad_max: outer, inner_affine_residual: inner, samples: n_samples }
}
