//! Newtonian potentials in two and three dimensions and the quadrature
//! identities they satisfy: the mean-value identity between nested domains,
//! the focal identity of ellipses and ellipsoids, and Neumann ovals.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::ellipsoid_potentials::{alpha_coefficients, ellipsoid_integrals, ellipsoidal_coordinate, EllipsoidPair};
use crate::error::{invalid, Error, Result};
use crate::geometry::{build_curve, curve_area, BoundaryCurve, CurveSpec};
use crate::linalg::least_squares;
use crate::quad::gauss_legendre;

/// (1/|D|) int_D (1/2pi) log|x-y| dy, evaluated from the boundary through
/// Delta_y [|y-x|^2 (log|y-x| - 1) / 8pi] = log|y-x| / 2pi.
pub fn newtonian_potential_2d(curve: &BoundaryCurve, x: [f64; 2]) -> f64 {
    let mut acc = 0.0;
    for k in 0..curve.len() {
        let p = curve.points[k];
        let d = [p[0] - x[0], p[1] - x[1]];
        let r2 = d[0] * d[0] + d[1] * d[1];
        if r2 == 0.0 {
            continue;
        }
        let nu = curve.normals[k];
        acc += (d[0] * nu[0] + d[1] * nu[1]) * (r2.ln() - 1.0) * curve.weight(k);
    }
    acc / (8.0 * PI * curve_area(curve))
}

/// U(x) = pi a1 a2 a3 int_lambda^inf (1 - sum x_j^2/(a_j^2+s)) g(s)^{-1/2} ds,
/// with lambda = 0 inside. Delta U = -4 pi inside.
pub fn ellipsoid_gravity(axes: [f64; 3], x: [f64; 3]) -> Result<f64> {
    let c2 = axes.map(|a| a * a);
    let inside = x.iter().zip(&c2).map(|(x, c)| x * x / c).sum::<f64>() <= 1.0;
    let lambda = if inside { 0.0 } else { ellipsoidal_coordinate(x, &c2)? };
    let e = ellipsoid_integrals(lambda, &c2)?;
    let quad: f64 = (0..3).map(|j| x[j] * x[j] * e.phi[j]).sum();
    Ok(PI * axes[0] * axes[1] * axes[2] * (e.i - quad))
}

/// N_E(x) = (1/|E|) int_E -1/(4 pi |x-y|) dy for the centered ellipsoid
/// with semi-axes `axes`.
pub fn ellipsoid_potential_3d(axes: [f64; 3], x: [f64; 3]) -> Result<f64> {
    if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(invalid(format!("semi-axes must be positive, got {axes:?}")));
    }
    let volume = 4.0 * PI / 3.0 * axes[0] * axes[1] * axes[2];
    Ok(-ellipsoid_gravity(axes, x)? / (4.0 * PI * volume))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Re,
    Im,
}

/// Re/Im z^n in the plane, or Re/Im of the solid harmonic
/// r^n P_n^m(cos theta) e^{i m phi} in space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicTestFunction {
    pub dimension: usize,
    pub degree: usize,
    pub order: usize,
    pub part: Part,
}

impl HarmonicTestFunction {
    pub fn planar(degree: usize, part: Part) -> Self {
        Self { dimension: 2, degree, order: degree, part }
    }

    pub fn label(&self) -> String {
        let p = match self.part {
            Part::Re => "re",
            Part::Im => "im",
        };
        if self.dimension == 2 {
            format!("{p}_z{}", self.degree)
        } else {
            format!("{p}_s{}_{}", self.degree, self.order)
        }
    }

    fn pick(&self, v: Complex64) -> f64 {
        match self.part {
            Part::Re => v.re,
            Part::Im => v.im,
        }
    }

    pub fn eval2(&self, x: [f64; 2]) -> f64 {
        self.pick(Complex64::new(x[0], x[1]).powu(self.degree as u32))
    }

    pub fn eval3(&self, x: [f64; 3]) -> f64 {
        self.pick(solid_harmonic(self.degree, self.order, x))
    }
}

/// r^n P_n^m(cos theta) e^{i m phi} as a polynomial: (2m-1)!! (x+iy)^m
/// raised in n through the Legendre recurrence.
fn solid_harmonic(n: usize, m: usize, x: [f64; 3]) -> Complex64 {
    let w = Complex64::new(x[0], x[1]);
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let dfact: f64 = (1..=m).map(|k| (2 * k - 1) as f64).product();
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = w.powu(m as u32) * dfact;
    for l in m + 1..=n {
        let next = (cur * x[2] * (2 * l - 1) as f64 - prev * r2 * (l + m - 1) as f64) / (l - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// All Re/Im z^n (n <= degree), with the constant listed once.
pub fn catalog_2d(degree: usize) -> Vec<HarmonicTestFunction> {
    let mut out = vec![HarmonicTestFunction::planar(0, Part::Re)];
    for n in 1..=degree {
        out.push(HarmonicTestFunction::planar(n, Part::Re));
        out.push(HarmonicTestFunction::planar(n, Part::Im));
    }
    out
}

/// The 2n+1 real solid harmonics of each degree n <= degree.
pub fn catalog_3d(degree: usize) -> Vec<HarmonicTestFunction> {
    let mut out = Vec::new();
    for n in 0..=degree {
        for m in 0..=n {
            out.push(HarmonicTestFunction { dimension: 3, degree: n, order: m, part: Part::Re });
            if m > 0 {
                out.push(HarmonicTestFunction { dimension: 3, degree: n, order: m, part: Part::Im });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResidual {
    pub function: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Outcome of checking a quadrature identity over a harmonic catalog.
/// Residuals are |lhs - rhs| / (|D| max_D |u|).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub identity: String,
    pub residual: f64,
    pub nodes: usize,
    pub derived: Vec<(String, f64)>,
    pub tests: Vec<TestResidual>,
}

impl QuadratureReport {
    fn new(identity: &str, nodes: usize, derived: Vec<(String, f64)>, tests: Vec<TestResidual>) -> Self {
        let residual = tests.iter().map(|t| t.residual).fold(0.0, f64::max);
        Self { identity: identity.into(), residual, nodes, derived, tests }
    }

    pub fn test(&self, function: &str) -> Option<&TestResidual> {
        self.tests.iter().find(|t| t.function == function)
    }
}

fn relative(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE)
}

/// A region whose harmonic moments can be integrated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Curve { curve: CurveSpec },
    Ellipsoid { axes: [f64; 3], #[serde(default)] center: [f64; 3] },
}

impl Region {
    pub fn curve(spec: CurveSpec) -> Self {
        Region::Curve { curve: spec }
    }

    pub fn ellipsoid(axes: [f64; 3]) -> Self {
        Region::Ellipsoid { axes, center: [0.0; 3] }
    }

    fn dimension(&self) -> usize {
        match self {
            Region::Curve { .. } => 2,
            Region::Ellipsoid { .. } => 3,
        }
    }
}

/// int_D z^n dA = (1/2i) oint conj(z) z^n dz for n = 0..=degree.
fn planar_moments(curve: &BoundaryCurve, degree: usize) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); degree + 1];
    for k in 0..curve.len() {
        let p = curve.points[k];
        let z = Complex64::new(p[0], p[1]);
        let t = curve.tangent(k);
        let dz = Complex64::new(t[0], t[1]) * curve.weight(k);
        let mut zn = z.conj() * dz;
        for mk in m.iter_mut() {
            *mk += zn;
            zn *= z;
        }
    }
    let two_i = Complex64::new(0.0, 2.0);
    m.into_iter().map(|v| v / two_i).collect()
}

/// Volume integrals of `fns` over an ellipsoid, exact for polynomials of
/// degree < 2 * radial nodes.
fn ellipsoid_integrals_of(axes: [f64; 3], center: [f64; 3], fns: &[HarmonicTestFunction]) -> Vec<f64> {
    let (r, wr) = gauss_legendre(12);
    let (ct, wt) = gauss_legendre(12);
    let nphi = 24;
    let jac = axes[0] * axes[1] * axes[2];
    let mut out = vec![0.0; fns.len()];
    for (ri, wri) in r.iter().zip(&wr) {
        let rr = 0.5 * (ri + 1.0);
        let wrr = 0.5 * wri * rr * rr;
        for (c, wc) in ct.iter().zip(&wt) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..nphi {
                let ph = 2.0 * PI * k as f64 / nphi as f64;
                let w = wrr * wc * 2.0 * PI / nphi as f64 * jac;
                let x = [
                    center[0] + axes[0] * rr * s * ph.cos(),
                    center[1] + axes[1] * rr * s * ph.sin(),
                    center[2] + axes[2] * rr * c,
                ];
                for (o, f) in out.iter_mut().zip(fns) {
                    *o += w * f.eval3(x);
                }
            }
        }
    }
    out
}

fn ellipsoid_surface_max(axes: [f64; 3], center: [f64; 3], f: &HarmonicTestFunction) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..=24 {
        let th = PI * i as f64 / 24.0;
        for k in 0..48 {
            let ph = 2.0 * PI * k as f64 / 48.0;
            let x = [
                center[0] + axes[0] * th.sin() * ph.cos(),
                center[1] + axes[1] * th.sin() * ph.sin(),
                center[2] + axes[2] * th.cos(),
            ];
            m = m.max(f.eval3(x).abs());
        }
    }
    m
}

struct Integrated {
    measure: f64,
    integrals: Vec<f64>,
    sup: Vec<f64>,
}

fn integrate(region: &Region, fns: &[HarmonicTestFunction], nodes: usize) -> Result<Integrated> {
    match region {
        Region::Curve { curve } => {
            let c = build_curve(curve, nodes)?;
            let degree = fns.iter().map(|f| f.degree).max().unwrap_or(0);
            let m = planar_moments(&c, degree);
            let integrals = fns
                .iter()
                .map(|f| match f.part {
                    Part::Re => m[f.degree].re,
                    Part::Im => m[f.degree].im,
                })
                .collect();
            let sup = fns.iter().map(|f| c.points.iter().map(|p| f.eval2(*p).abs()).fold(0.0, f64::max)).collect();
            Ok(Integrated { measure: curve_area(&c), integrals, sup })
        }
        Region::Ellipsoid { axes, center } => {
            if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
                return Err(invalid(format!("semi-axes must be positive, got {axes:?}")));
            }
            Ok(Integrated {
                measure: 4.0 * PI / 3.0 * axes[0] * axes[1] * axes[2],
                integrals: ellipsoid_integrals_of(*axes, *center, fns),
                sup: fns.iter().map(|f| ellipsoid_surface_max(*axes, *center, f)).collect(),
            })
        }
    }
}

/// (1/|Omega|) int_Omega u against (1/|D|) int_D u over the harmonic
/// catalog up to `degree`. Residuals are scaled by max_Omega |u|.
pub fn mean_value_identity(d: &Region, omega: &Region, degree: usize, nodes: usize) -> Result<QuadratureReport> {
    if d.dimension() != omega.dimension() {
        return Err(invalid("regions must have the same dimension"));
    }
    let fns = if d.dimension() == 2 { catalog_2d(degree) } else { catalog_3d(degree) };
    let a = integrate(d, &fns, nodes)?;
    let b = integrate(omega, &fns, nodes)?;
    let tests = fns
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let lhs = b.integrals[i] / b.measure;
            let rhs = a.integrals[i] / a.measure;
            TestResidual { function: f.label(), lhs, rhs, residual: relative(lhs, rhs, b.sup[i]) }
        })
        .collect();
    Ok(QuadratureReport::new("mean_value", nodes, vec![], tests))
}

/// int_E u = C int_F u(x') sqrt(1 - q(x')) dx' where F is the focal
/// ellipse (segment in the plane) with semi-axes sqrt(a_i^2 - a_d^2) and
/// C = 2 a_d prod_{i<d} a_i / sqrt(a_i^2 - a_d^2).
pub fn focal_ellipse_identity(axes: &[f64], degree: usize, nodes: usize) -> Result<QuadratureReport> {
    let d = axes.len();
    if d != 2 && d != 3 {
        return Err(invalid(format!("dimension must be 2 or 3, got {d}")));
    }
    if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(invalid(format!("semi-axes must be positive, got {axes:?}")));
    }
    if axes.windows(2).any(|w| w[0] < w[1]) {
        return Err(invalid(format!("semi-axes must be non-increasing, got {axes:?}")));
    }
    let ad = axes[d - 1];
    if axes[d - 2] == ad {
        return Err(Error::DegenerateFoci(ad));
    }
    let focal: Vec<f64> = axes[..d - 1].iter().map(|a| (a * a - ad * ad).sqrt()).collect();
    let coef = 2.0 * ad * axes[..d - 1].iter().zip(&focal).map(|(a, f)| a / f).product::<f64>();
    let (psi, wpsi) = gauss_legendre(32);
    let mut derived: Vec<(String, f64)> = focal.iter().enumerate().map(|(i, f)| (format!("focal_axis_{}", i + 1), *f)).collect();
    derived.push(("coefficient".into(), coef));
    let rows = if d == 2 {
        let fns = catalog_2d(degree);
        let lhs = integrate(&Region::curve(CurveSpec::ellipse(axes[0], axes[1])), &fns, nodes)?;
        // x = f cos psi, sqrt(1 - x^2/f^2) dx = f sin^2 psi dpsi on [0, pi]
        fns.iter()
            .enumerate()
            .map(|(i, f)| {
                let mut r = 0.0;
                for (p, w) in psi.iter().zip(&wpsi) {
                    let t = 0.5 * PI * (p + 1.0);
                    r += 0.5 * PI * w * focal[0] * t.sin().powi(2) * f.eval2([focal[0] * t.cos(), 0.0]);
                }
                (f.label(), lhs.integrals[i], coef * r, lhs.measure * lhs.sup[i])
            })
            .collect::<Vec<_>>()
    } else {
        let fns = catalog_3d(degree);
        let ax = [axes[0], axes[1], axes[2]];
        let lhs = integrate(&Region::ellipsoid(ax), &fns, nodes)?;
        // polar coordinates on F with r = sin psi
        let nt = 48;
        fns.iter()
            .enumerate()
            .map(|(i, f)| {
                let mut r = 0.0;
                for (p, w) in psi.iter().zip(&wpsi) {
                    let s = 0.25 * PI * (p + 1.0);
                    let ws = 0.25 * PI * w * s.sin() * s.cos().powi(2) * focal[0] * focal[1];
                    for k in 0..nt {
                        let t = 2.0 * PI * k as f64 / nt as f64;
                        let x = [focal[0] * s.sin() * t.cos(), focal[1] * s.sin() * t.sin(), 0.0];
                        r += ws * 2.0 * PI / nt as f64 * f.eval3(x);
                    }
                }
                (f.label(), lhs.integrals[i], coef * r, lhs.measure * lhs.sup[i])
            })
            .collect::<Vec<_>>()
    };
    // same check with the coefficient lacking the factor a_d
    let uncorrected = rows.iter().map(|(_, l, r, sc)| relative(*l, r / ad, *sc)).fold(0.0, f64::max);
    derived.push(("uncorrected_residual".into(), uncorrected));
    let tests = rows
        .into_iter()
        .map(|(function, lhs, rhs, sc)| TestResidual { function, lhs, rhs, residual: relative(lhs, rhs, sc) })
        .collect();
    Ok(QuadratureReport::new("focal_ellipse", nodes, derived, tests))
}

/// int_Omega u = (|Omega|/2)(u(p) + u(-p)) on r^2 = alpha^2 + 4 eps^2 cos^2 theta,
/// with p = (p, 0) derived from the moment of x^2 - y^2.
pub fn neumann_oval_identity(alpha: f64, epsilon: f64, degree: usize, nodes: usize) -> Result<QuadratureReport> {
    if !(alpha > 0.0 && epsilon > 0.0 && alpha.is_finite() && epsilon.is_finite()) {
        return Err(invalid("alpha and epsilon must be positive"));
    }
    let spec = CurveSpec::NeumannOval { alpha, epsilon };
    let fns = catalog_2d(degree.max(2));
    let it = integrate(&Region::curve(spec), &fns, nodes)?;
    let area = it.measure;
    let q2 = fns.iter().position(|f| f.degree == 2 && f.part == Part::Re).expect("catalog has Re z^2");
    let p = (it.integrals[q2] / area).max(0.0).sqrt();
    let tests = fns
        .iter()
        .enumerate()
        .filter(|(_, f)| f.degree <= degree)
        .map(|(i, f)| {
            let rhs = 0.5 * area * (f.eval2([p, 0.0]) + f.eval2([-p, 0.0]));
            TestResidual { function: f.label(), lhs: it.integrals[i], rhs, residual: relative(it.integrals[i], rhs, area * it.sup[i]) }
        })
        .collect();
    Ok(QuadratureReport::new(
        "neumann_oval",
        nodes,
        vec![("p".into(), p), ("area".into(), area), ("weight".into(), area / 2.0)],
        tests,
    ))
}

/// Diagnostics of w = |Omega| (N_Omega - N_D) for two centered ellipsoids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonianCheck {
    /// max |w| over exterior samples
    pub outside_max: f64,
    /// largest shell semi-axis
    pub scale: f64,
    /// max |w - fit| over core samples
    pub fit_residual: f64,
    /// fitted coefficients of x_j^2
    pub fitted_alpha: [f64; 3],
    /// alpha_coefficients of the pair, when it is confocal
    pub expected_alpha: Option<[f64; 3]>,
    pub linear_term_norm: f64,
    pub cross_term_norm: f64,
    pub samples: [usize; 2],
}

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n2: f64 = v.iter().map(|a| a * a).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return v.map(|a| a / n);
        }
    }
}

/// Samples w outside both ellipsoids (radii 1.1 to 3 times the largest
/// shell axis) and inside the core, and fits a full quadratic to the core
/// values.
pub fn check_newtonian_pair(
    core_axes2: [f64; 3],
    shell_axes2: [f64; 3],
    n_outside: usize,
    n_inside: usize,
    seed: u64,
) -> Result<NewtonianCheck> {
    if n_inside < 10 || n_outside == 0 {
        return Err(invalid("need at least 10 core samples and one exterior sample"));
    }
    let da = core_axes2.map(f64::sqrt);
    let oa = shell_axes2.map(f64::sqrt);
    if da.iter().zip(&oa).any(|(d, o)| !(*d > 0.0 && o > d)) {
        return Err(invalid("shell must strictly contain the core axis by axis"));
    }
    let vol_o = 4.0 * PI / 3.0 * oa[0] * oa[1] * oa[2];
    let w = |x: [f64; 3]| -> Result<f64> {
        Ok(vol_o * (ellipsoid_potential_3d(oa, x)? - ellipsoid_potential_3d(da, x)?))
    };
    let scale = oa.iter().cloned().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outside_max: f64 = 0.0;
    for _ in 0..n_outside {
        let dir = random_direction(&mut rng);
        let r = scale * rng.gen_range(1.1..3.0);
        outside_max = outside_max.max(w(dir.map(|a| a * r))?.abs());
    }
    let mut rows = Vec::with_capacity(n_inside * 10);
    let mut vals = Vec::with_capacity(n_inside);
    let mut pts = Vec::with_capacity(n_inside);
    for _ in 0..n_inside {
        let dir = random_direction(&mut rng);
        let t = 0.9 * rng.gen_range(0.0f64..1.0).cbrt();
        let x = [da[0] * dir[0] * t, da[1] * dir[1] * t, da[2] * dir[2] * t];
        vals.push(w(x)?);
        rows.extend_from_slice(&[
            1.0,
            x[0],
            x[1],
            x[2],
            x[0] * x[0],
            x[1] * x[1],
            x[2] * x[2],
            x[0] * x[1],
            x[0] * x[2],
            x[1] * x[2],
        ]);
        pts.push(x);
    }
    let a = DMatrix::from_row_slice(n_inside, 10, &rows);
    let coef = least_squares(a.clone(), &vals)?;
    let fitted = &a * nalgebra::DVector::from_column_slice(&coef);
    let fit_residual = vals.iter().zip(fitted.iter()).map(|(v, f)| (v - f).abs()).fold(0.0, f64::max);
    let norm = |s: &[f64]| s.iter().map(|v| v * v).sum::<f64>().sqrt();
    let confocal = {
        let d: Vec<f64> = (0..3).map(|j| shell_axes2[j] - core_axes2[j]).collect();
        (d[0] - d[1]).abs() <= 1e-12 * scale * scale && (d[0] - d[2]).abs() <= 1e-12 * scale * scale
    };
    let expected_alpha = if confocal {
        Some(alpha_coefficients(shell_axes2[0] - core_axes2[0], &core_axes2)?)
    } else {
        None
    };
    Ok(NewtonianCheck {
        outside_max,
        scale,
        fit_residual,
        fitted_alpha: [coef[4], coef[5], coef[6]],
        expected_alpha,
        linear_term_norm: norm(&coef[1..4]),
        cross_term_norm: norm(&coef[7..10]),
        samples: [n_outside, n_inside],
    })
}

/// check_newtonian_pair for the confocal pair (c^2, rho0).
pub fn check_newtonian_formulation(pair: &EllipsoidPair, n_outside: usize, n_inside: usize, seed: u64) -> Result<NewtonianCheck> {
    pair.validate()?;
    check_newtonian_pair(pair.c2, pair.shell_axes2(), n_outside, n_inside, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn disk_newtonian_potential() {
        let c = build_curve(&CurveSpec::circle(1.5), 256).unwrap();
        let out = newtonian_potential_2d(&c, [2.0, 1.0]);
        assert!((out - 5f64.sqrt().ln() / (2.0 * PI)).abs() < 1e-12);
        let x = [0.3, -0.4];
        let inside = 0.25 / (4.0 * PI * 2.25) + 1.5f64.ln() / (2.0 * PI) - 1.0 / (4.0 * PI);
        assert!((newtonian_potential_2d(&c, x) - inside).abs() < 1e-12);
    }

    #[test]
    fn newtonian_poisson_property() {
        let map = crate::geometry::ConformalMap::monomial(2, Complex64::new(0.2, 0.0)).unwrap();
        let c = build_curve(&CurveSpec::conformal(map), 512).unwrap();
        let h = 1e-3;
        let n = |x: [f64; 2]| newtonian_potential_2d(&c, x);
        let lap = (n([h, 0.1]) + n([-h, 0.1]) + n([0.0, 0.1 + h]) + n([0.0, 0.1 - h]) - 4.0 * n([0.0, 0.1])) / (h * h);
        assert!((lap - 1.0 / curve_area(&c)).abs() < 1e-5);
    }

    #[test]
    fn sphere_point_mass() {
        assert_relative_eq!(ellipsoid_gravity([1.0; 3], [2.0, 0.0, 0.0]).unwrap(), 2.0 * PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(ellipsoid_potential_3d([1.0; 3], [2.0, 0.0, 0.0]).unwrap(), -1.0 / (8.0 * PI), epsilon = 1e-12);
    }

    #[test]
    fn ellipsoid_potential_laplacian_inside() {
        let a = [2.0, 1.5, 1.0];
        let x = [0.3, 0.2, -0.1];
        let h = 1e-3;
        let f = |dx: [f64; 3]| ellipsoid_gravity(a, [x[0] + dx[0], x[1] + dx[1], x[2] + dx[2]]).unwrap();
        let mut lap = -6.0 * f([0.0; 3]);
        for j in 0..3 {
            let mut e = [0.0; 3];
            e[j] = h;
            lap += f(e);
            e[j] = -h;
            lap += f(e);
        }
        assert!((lap / (h * h) + 4.0 * PI).abs() < 1e-5);
    }

    #[test]
    fn solid_harmonics_are_harmonic() {
        // the stencil error of a degree <= 6 polynomial is c1 h^2 + c2 h^4,
        // removed exactly by two Richardson steps
        let x = [0.3, -0.7, 0.5];
        for f in catalog_3d(6) {
            let lap = |h: f64| {
                let mut l = -6.0 * f.eval3(x);
                for j in 0..3 {
                    for s in [h, -h] {
                        let mut y = x;
                        y[j] += s;
                        l += f.eval3(y);
                    }
                }
                l / (h * h)
            };
            let r1 = |h: f64| (4.0 * lap(h / 2.0) - lap(h)) / 3.0;
            let r2 = (16.0 * r1(0.05) - r1(0.1)) / 15.0;
            assert!(r2.abs() < 1e-6, "{} {r2}", f.label());
        }
        assert_eq!(catalog_3d(6).len(), 49);
    }

    #[test]
    fn focal_mass_checks() {
        let r = focal_ellipse_identity(&[2.0, 1.0], 6, 256).unwrap();
        let one = r.test("re_z0").unwrap();
        assert_relative_eq!(one.lhs, 2.0 * PI, epsilon = 1e-12);
        assert_relative_eq!(one.rhs, 2.0 * PI, epsilon = 1e-12);
        assert!(r.residual < 1e-10);
        let r3 = focal_ellipse_identity(&[3.0, 2.0, 1.0], 6, 256).unwrap();
        let one = r3.test("re_s0_0").unwrap();
        assert_relative_eq!(one.rhs, 8.0 * PI, epsilon = 1e-12);
        assert!(r3.residual < 1e-10);
        assert!(matches!(focal_ellipse_identity(&[2.0, 1.0, 1.0], 2, 64), Err(Error::DegenerateFoci(_))));
    }

    #[test]
    fn neumann_oval_foci() {
        let r = neumann_oval_identity(1.0, 0.5, 6, 512).unwrap();
        assert!((r.derived[0].1 - 0.5).abs() < 1e-12);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn mean_value_controls() {
        let d = Region::curve(CurveSpec::ellipse(2.0, 1.0));
        let o = Region::curve(CurveSpec::ellipse(7f64.sqrt(), 2.0));
        assert!(mean_value_identity(&d, &o, 6, 256).unwrap().residual < 1e-10);
        let e = Region::curve(CurveSpec::Circle { radius: 0.5, center: [0.4, 0.0] });
        let big = Region::curve(CurveSpec::circle(2.0));
        let r = mean_value_identity(&e, &big, 6, 256).unwrap();
        assert!(r.test("re_z1").unwrap().residual > 0.1);
    }

    #[test]
    fn confocal_newtonian_formulation() {
        let pair = EllipsoidPair::new([4.0, 2.0, 1.0], 2.0).unwrap();
        let c = check_newtonian_formulation(&pair, 40, 40, 7).unwrap();
        assert!(c.outside_max < 1e-6 * c.scale * c.scale);
        let e = c.expected_alpha.unwrap();
        for j in 0..3 {
            assert!((c.fitted_alpha[j] - e[j]).abs() < 1e-5);
        }
        assert!(c.linear_term_norm < 1e-7);
    }
}
