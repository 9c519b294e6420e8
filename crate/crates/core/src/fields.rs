//! Potentials around inclusions: layer-potential fields for simple and
//! core-shell inclusions, a Fourier-Galerkin solver for a perfectly
//! conducting core with an imperfect interface, decay-rate estimation,
//! dipole fitting and grid sampling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{invalid, Error, Result};
use crate::geometry::{build_curve, BoundaryCurve, ConformalMap, CurveSpec};
use crate::layer_potentials::{evaluation_clearance, single_layer_at};
use crate::linalg::condition_number_svd;
use crate::neutrality::{bd_bound, gb_coefficients, BondingParameter};
use crate::polarization::{solve_coreshell, solve_simple, ConductivityProfile, CoreShellSolution, SimpleSolution};

pub const GALERKIN_CONDITION_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Simple,
    Coreshell,
    Imperfect,
}

#[derive(Clone, Debug)]
enum Representation {
    /// u = a.x + sum of single layers
    Layers(Vec<(BoundaryCurve, Vec<f64>)>),
    /// u = Re V(zeta) outside, lambda_core inside
    Spectral { map: ConformalMap, alpha: Complex64, solution: SpectralExteriorSolution },
}

/// Total potential u for a unit background field a.x.
#[derive(Clone, Debug)]
pub struct FieldSolution {
    pub a: [f64; 2],
    pub provenance: Provenance,
    repr: Representation,
}

/// Value of u and of the perturbation u - a.x at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldValue {
    pub u: f64,
    pub pert: f64,
}

/// Which inclusion to solve for.
pub enum FieldConfig<'a> {
    Simple { curve: &'a BoundaryCurve, k: f64 },
    Coreshell { core: &'a BoundaryCurve, shell: &'a BoundaryCurve, profile: &'a ConductivityProfile },
}

fn combine(a: [f64; 2], d: &[Vec<f64>; 2]) -> Vec<f64> {
    d[0].iter().zip(&d[1]).map(|(x, y)| a[0] * x + a[1] * y).collect()
}

impl FieldSolution {
    pub fn from_simple(curve: &BoundaryCurve, sol: &SimpleSolution, a: [f64; 2]) -> Self {
        Self {
            a,
            provenance: Provenance::Simple,
            repr: Representation::Layers(vec![(curve.clone(), combine(a, &sol.densities))]),
        }
    }

    pub fn from_coreshell(core: &BoundaryCurve, shell: &BoundaryCurve, sol: &CoreShellSolution, a: [f64; 2]) -> Self {
        Self {
            a,
            provenance: Provenance::Coreshell,
            repr: Representation::Layers(vec![
                (core.clone(), combine(a, &sol.core)),
                (shell.clone(), combine(a, &sol.shell)),
            ]),
        }
    }

    pub fn from_spectral(map: &ConformalMap, solution: SpectralExteriorSolution) -> Self {
        let alpha = solution.alpha;
        let a = [alpha.re, -alpha.im];
        Self {
            a,
            provenance: Provenance::Imperfect,
            repr: Representation::Spectral { map: map.clone(), alpha, solution },
        }
    }

    pub fn solve(config: &FieldConfig, a: [f64; 2]) -> Result<Self> {
        match *config {
            FieldConfig::Simple { curve, k } => Ok(Self::from_simple(curve, &solve_simple(curve, k)?, a)),
            FieldConfig::Coreshell { core, shell, profile } => {
                Ok(Self::from_coreshell(core, shell, &solve_coreshell(core, shell, profile)?, a))
            }
        }
    }

    pub fn spectral(&self) -> Option<&SpectralExteriorSolution> {
        match &self.repr {
            Representation::Spectral { solution, .. } => Some(solution),
            Representation::Layers(_) => None,
        }
    }

    /// Outermost boundary curve, if the representation has one.
    fn outer_curve(&self) -> Option<&BoundaryCurve> {
        match &self.repr {
            Representation::Layers(l) => l.last().map(|(c, _)| c),
            Representation::Spectral { .. } => None,
        }
    }

    /// Largest distance from the origin to the inclusion boundary.
    pub fn circumradius(&self) -> f64 {
        match &self.repr {
            Representation::Layers(l) => l.iter().map(|(c, _)| c.circumradius([0.0, 0.0])).fold(0.0, f64::max),
            Representation::Spectral { map, .. } => (0..1024)
                .map(|k| map.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 1024.0)).norm())
                .fold(0.0, f64::max),
        }
    }

    /// True when p is not admissible for evaluation (too close to a boundary).
    pub fn too_close(&self, p: [f64; 2]) -> Option<Error> {
        match &self.repr {
            Representation::Layers(l) => {
                for (c, _) in l {
                    let required = evaluation_clearance(c);
                    let distance = c.distance_to(p);
                    if !(distance > required) {
                        return Some(Error::PointTooClose { x: p[0], y: p[1], distance, required });
                    }
                }
                None
            }
            Representation::Spectral { map, .. } => {
                let z = Complex64::new(p[0], p[1]);
                match map.invert(z) {
                    Some(zeta) if zeta.norm() < 1.0 + 1e-3 => Some(Error::PointTooClose {
                        x: p[0],
                        y: p[1],
                        distance: zeta.norm() - 1.0,
                        required: 1e-3,
                    }),
                    _ => None,
                }
            }
        }
    }

    /// Whether p lies inside the outermost boundary.
    pub fn is_inside(&self, p: [f64; 2]) -> bool {
        match &self.repr {
            Representation::Layers(_) => self.outer_curve().map(|c| c.contains(p)).unwrap_or(false),
            Representation::Spectral { map, .. } => {
                let z = Complex64::new(p[0], p[1]);
                match map.invert(z) {
                    Some(zeta) => zeta.norm() < 1.0,
                    None => true,
                }
            }
        }
    }

    fn value_unchecked(&self, p: [f64; 2]) -> FieldValue {
        let ax = self.a[0] * p[0] + self.a[1] * p[1];
        match &self.repr {
            Representation::Layers(layers) => {
                let pert: f64 = layers.iter().map(|(c, phi)| single_layer_at(c, phi, p)).sum();
                FieldValue { u: ax + pert, pert }
            }
            Representation::Spectral { map, alpha, solution } => {
                let z = Complex64::new(p[0], p[1]);
                match map.invert(z) {
                    Some(zeta) if zeta.norm() >= 1.0 => {
                        let inv = zeta.inv();
                        let mut acc = Complex64::new(0.0, 0.0);
                        let mut pw = inv;
                        for c in &solution.coefficients {
                            acc += c * pw;
                            pw *= inv;
                        }
                        // V = alpha Phi(zeta) + sum c_n zeta^{-n} and Phi(zeta) = z
                        let u = (alpha * z + acc).re;
                        FieldValue { u, pert: u - ax }
                    }
                    _ => FieldValue { u: solution.lambda_core, pert: solution.lambda_core - ax },
                }
            }
        }
    }

    /// u and u - a.x at each point; points must respect the clearance rule.
    pub fn evaluate(&self, points: &[[f64; 2]]) -> Result<Vec<FieldValue>> {
        for &p in points {
            if let Some(e) = self.too_close(p) {
                return Err(e);
            }
        }
        Ok(points.par_iter().map(|&p| self.value_unchecked(p)).collect())
    }
}

/// Field of the inclusion described by `config` at `points`.
pub fn exterior_field(config: &FieldConfig, a: [f64; 2], points: &[[f64; 2]]) -> Result<Vec<FieldValue>> {
    FieldSolution::solve(config, a)?.evaluate(points)
}

fn circle_points(r: f64, m: usize) -> Vec<[f64; 2]> {
    (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

/// Largest |u - a.x| over m equispaced directions at radius r.
pub fn max_perturbation(solution: &FieldSolution, r: f64, m: usize) -> Result<f64> {
    Ok(solution.evaluate(&circle_points(r, m))?.iter().map(|v| v.pert.abs()).fold(0.0, f64::max))
}

pub const NOISE_FLOOR: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub exponent: f64,
    pub radii: [f64; 2],
    pub amplitudes: [f64; 2],
    pub below_noise: bool,
}

/// p = -log(delta(R2)/delta(R1)) / log(R2/R1) with delta the maximum
/// perturbation over m directions.
pub fn decay_exponent(solution: &FieldSolution, radii: (f64, f64), m: usize) -> Result<DecayReport> {
    let (r1, r2) = radii;
    if !(r2 > r1) || m < 16 {
        return Err(invalid("need R2 > R1 and at least 16 directions"));
    }
    let rc = solution.circumradius();
    if !(r1 > 2.0 * rc) {
        return Err(invalid(format!("R1 = {r1} must exceed twice the circumradius {rc}")));
    }
    let d1 = max_perturbation(solution, r1, m)?;
    let d2 = max_perturbation(solution, r2, m)?;
    Ok(DecayReport {
        exponent: -(d2 / d1).ln() / (r2 / r1).ln(),
        radii: [r1, r2],
        amplitudes: [d1, d2],
        below_noise: d1 < NOISE_FLOOR,
    })
}

/// Polarization tensor recovered from the first Fourier mode of the far
/// field at radius r: u - a.x = -<a, M x> / (2 pi |x|^2) + higher modes.
/// `solutions[l]` must be the field for a = e_l.
pub fn dipole_fit(solutions: &[FieldSolution; 2], r: f64, m: usize) -> Result<[[f64; 2]; 2]> {
    let pts = circle_points(r, m);
    let mut out = [[0.0; 2]; 2];
    for (l, sol) in solutions.iter().enumerate() {
        let vals = sol.evaluate(&pts)?;
        let (mut c, mut s) = (0.0, 0.0);
        for (k, v) in vals.iter().enumerate() {
            let t = 2.0 * PI * k as f64 / m as f64;
            c += v.pert * t.cos();
            s += v.pert * t.sin();
        }
        // mean of pert cos t is -m_l1 / (4 pi r)
        let scale = -4.0 * PI * r / m as f64;
        out[l] = [c * scale, s * scale];
    }
    Ok(out)
}

/// Exterior solution of beta (u - lambda) = d_nu u on the boundary of a
/// perfect conductor, posed on |zeta| = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralExteriorSolution {
    pub modes: usize,
    /// alpha = a_1 - i a_2
    pub alpha: Complex64,
    /// c_n, n = 1..modes, of the decaying part sum c_n zeta^{-n}
    pub coefficients: Vec<Complex64>,
    pub lambda_core: f64,
    /// Far-field coefficient alpha_1 = c_1.
    pub alpha1: Complex64,
    /// max |c_n| over the top quarter of the modes, relative to max |c_n|.
    pub tail: f64,
    pub condition: f64,
}

/// Fourier-Galerkin solve with unknowns lambda and g_n = alpha b_n + c_n.
pub fn solve_imperfect_exterior(
    map: &ConformalMap,
    beta: &BondingParameter,
    alpha: Complex64,
    modes: usize,
) -> Result<SpectralExteriorSolution> {
    if modes < 4 {
        return Err(invalid("at least 4 modes are required"));
    }
    if beta.map != *map {
        return Err(invalid("bonding parameter was built for a different map"));
    }
    let nq = (8 * modes).max(256);
    let theta: Vec<f64> = (0..nq).map(|j| 2.0 * PI * j as f64 / nq as f64).collect();
    let bt: Vec<f64> = theta.iter().map(|&t| beta.pulled_back(t)).collect();
    if let Some(v) = bt.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::NonPositiveBeta(format!("pulled-back sample {v}")));
    }
    let n = 2 * modes + 1;
    // column 0: lambda; columns 2n-1, 2n: Re g_n, Im g_n
    let basis = |col: usize, t: f64, b: f64| -> f64 {
        if col == 0 {
            return -b;
        }
        let k = col.div_ceil(2) as f64;
        let (s, c) = (k * t).sin_cos();
        if col % 2 == 1 { (b + k) * c } else { (b + k) * s }
    };
    let test = |row: usize, t: f64| -> f64 {
        if row == 0 {
            return 1.0;
        }
        let k = row.div_ceil(2) as f64;
        if row % 2 == 1 { (k * t).cos() } else { (k * t).sin() }
    };
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    let w = 2.0 * PI / nq as f64;
    for (j, &t) in theta.iter().enumerate() {
        let b = bt[j];
        let at = alpha.re * t.cos() - alpha.im * t.sin();
        let f = at - b * at;
        let cols: Vec<f64> = (0..n).map(|c| basis(c, t, b)).collect();
        for row in 0..n {
            let tr = test(row, t) * w;
            rhs[row] += tr * f;
            for (col, v) in cols.iter().enumerate() {
                a[(row, col)] += tr * v;
            }
        }
    }
    let condition = condition_number_svd(&a);
    if !(condition <= GALERKIN_CONDITION_LIMIT) {
        return Err(Error::IllConditioned(condition));
    }
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SolveFailure("Galerkin matrix is singular".into()))?;
    let lambda_core = x[0];
    let coefficients: Vec<Complex64> = (1..=modes)
        .map(|k| {
            let g = Complex64::new(x[2 * k - 1], x[2 * k]);
            let b = map.coefficients().get(k - 1).copied().unwrap_or_default();
            g - alpha * b
        })
        .collect();
    let max = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let top = coefficients[(3 * modes) / 4..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(SpectralExteriorSolution {
        modes,
        alpha,
        alpha1: coefficients[0],
        tail: if max > 0.0 { top / max } else { 0.0 },
        coefficients,
        lambda_core,
        condition,
    })
}

/// Bonding parameter beta |Phi'| = A + B cos 2(theta + tau) with B and tau
/// from the closed form and A re-fitted by secant iteration until the
/// far-field coefficient alpha_1 vanishes for alpha = 1.
pub fn calibrate_bonding_mean(map: &ConformalMap, n: usize, modes: usize, tol: f64) -> Result<BondingParameter> {
    let b = map.b_d().norm();
    if b > bd_bound() - 1e-12 {
        return Err(Error::BDTooLarge(b));
    }
    let (a0, amp) = gb_coefficients(b);
    let rot = map.normalizing_rotation();
    // real-frame map, where alpha_1 for alpha = 1 is real
    let real_map = map.rotated(rot);
    let f = |a: f64| -> Result<f64> {
        let bp = BondingParameter::pulled(&real_map, a, amp, 0.0, n)?;
        Ok(solve_imperfect_exterior(&real_map, &bp, Complex64::new(1.0, 0.0), modes)?.alpha1.re)
    };
    let (mut x0, mut x1) = (a0, a0 * 1.01);
    let (mut f0, mut f1) = (f(x0)?, f(x1)?);
    for _ in 0..50 {
        if f1.abs() <= tol {
            return BondingParameter::pulled(map, x1, amp, rot, n);
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        (x0, f0) = (x1, f1);
        x1 = x2;
        f1 = f(x1)?;
    }
    Err(Error::NoConvergence { iterations: 50, residual: f1.abs() })
}

/// Cell classification in a sampled grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[repr(u8)]
pub enum CellMask {
    Exterior = 0,
    Interior = 1,
    Masked = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub pert: f64,
    pub mask: CellMask,
}

/// Row-major grid, y outer and x inner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<GridCell>,
}

impl FieldGrid {
    /// CSV with header `x,y,u,pert,mask`; masked cells hold NaN.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,y,u,pert,mask")?;
        for c in &self.cells {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{}", c.x, c.y, c.u, c.pert, c.mask as u8)?;
        }
        Ok(())
    }

    /// Largest |pert| over exterior cells.
    pub fn max_exterior_perturbation(&self) -> f64 {
        self.cells
            .iter()
            .filter(|c| c.mask == CellMask::Exterior)
            .map(|c| c.pert.abs())
            .fold(0.0, f64::max)
    }
}

pub const MAX_GRID_CELLS: usize = 2048 * 2048;

/// Samples the solution on an nx x ny grid over [xmin, xmax] x [ymin, ymax].
/// Cells within the evaluation clearance of a boundary are masked; with
/// `exterior_only` interior cells are masked too.
pub fn grid_sample(
    solution: &FieldSolution,
    bbox: [f64; 4],
    resolution: (usize, usize),
    exterior_only: bool,
) -> Result<FieldGrid> {
    let (nx, ny) = resolution;
    if nx < 2 || ny < 2 || nx * ny > MAX_GRID_CELLS {
        return Err(invalid(format!("grid resolution {nx}x{ny} outside 2..2048 per side")));
    }
    let [x0, x1, y0, y1] = bbox;
    if !(x1 > x0 && y1 > y0) {
        return Err(invalid("bounding box is empty"));
    }
    let cells: Vec<GridCell> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let x = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
            let p = [x, y];
            let inside = solution.is_inside(p);
            if solution.too_close(p).is_some() || (exterior_only && inside) {
                return GridCell { x, y, u: f64::NAN, pert: f64::NAN, mask: CellMask::Masked };
            }
            let v = solution.value_unchecked(p);
            GridCell {
                x,
                y,
                u: v.u,
                pert: v.pert,
                mask: if inside { CellMask::Interior } else { CellMask::Exterior },
            }
        })
        .collect();
    Ok(FieldGrid { nx, ny, cells })
}

/// Convenience: discretize a spec and solve a simple inclusion field.
pub fn simple_field(spec: &CurveSpec, n: usize, k: f64, a: [f64; 2]) -> Result<FieldSolution> {
    let curve = build_curve(spec, n)?;
    FieldSolution::solve(&FieldConfig::Simple { curve: &curve, k }, a)
}
