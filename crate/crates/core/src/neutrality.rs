//! Neutrality conditions and constructions of neutral and weakly neutral
//! structures: concentric coatings, coatings of b_D = 0 domains, bonding
//! parameters, Newton search for coatings of perturbed disks, and matrix
//! conductivities for confocal ellipsoids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::ellipsoid_potentials::{alpha_coefficients, EllipsoidPair};
use crate::error::{invalid, Error, Result};
use crate::geometry::{build_curve, BoundaryCurve, ConformalMap, CurveSpec, TrigPoly};
use crate::polarization::{conductivity_serde, pt_coreshell, ConductivityProfile, PolarizationTensor};

fn check_dimension(d: usize) -> Result<f64> {
    match d {
        2 | 3 => Ok(d as f64),
        _ => Err(invalid(format!("dimension must be 2 or 3, got {d}"))),
    }
}

/// Matrix conductivity that makes concentric disks (d = 2) or balls (d = 3)
/// with volume fraction f neutral:
/// (d-1+q)(t-1) + f(1-q)(t+d-1) = 0 with q = sigma_c/sigma_s, t = sigma_m/sigma_s.
pub fn neutral_matrix_conductivity(sigma_c: f64, sigma_s: f64, f: f64, d: usize) -> Result<f64> {
    let dm1 = check_dimension(d)? - 1.0;
    if !(f > 0.0 && f < 1.0) {
        return Err(invalid(format!("volume fraction must lie in (0, 1), got {f}")));
    }
    if !(sigma_s > 0.0 && sigma_s.is_finite()) || !(sigma_c > 0.0) || sigma_c.is_nan() {
        return Err(invalid("conductivities must be positive"));
    }
    let t = if sigma_c.is_infinite() {
        (1.0 + f * dm1) / (1.0 - f)
    } else {
        let q = sigma_c / sigma_s;
        let den = (dm1 + q) + f * (1.0 - q);
        if den == 0.0 {
            return Err(invalid("neutrality condition has a vanishing denominator"));
        }
        ((dm1 + q) - f * (1.0 - q) * dm1) / den
    };
    let sigma_m = t * sigma_s;
    if !(sigma_m > 0.0 && sigma_m.is_finite()) {
        return Err(Error::NoPositiveSolution(sigma_m));
    }
    Ok(sigma_m)
}

/// Volume fraction for which the concentric structure is neutral; the
/// inverse of [`neutral_matrix_conductivity`] in f.
pub fn neutral_volume_fraction(sigma_c: f64, sigma_s: f64, sigma_m: f64, d: usize) -> Result<f64> {
    let dm1 = check_dimension(d)? - 1.0;
    let t = sigma_m / sigma_s;
    let f = if sigma_c.is_infinite() {
        (t - 1.0) / (t + dm1)
    } else {
        let q = sigma_c / sigma_s;
        -(dm1 + q) * (t - 1.0) / ((1.0 - q) * (t + dm1))
    };
    if !(f > 0.0 && f < 1.0) {
        return Err(invalid(format!("no neutral volume fraction in (0, 1): got {f}")));
    }
    Ok(f)
}

/// Left-hand side of the concentric neutrality condition.
pub fn neutrality_residual(sigma_c: f64, sigma_s: f64, sigma_m: f64, f: f64, d: usize) -> f64 {
    let dm1 = d as f64 - 1.0;
    let t = sigma_m / sigma_s;
    if sigma_c.is_infinite() {
        return (t - 1.0) - f * (t + dm1);
    }
    let q = sigma_c / sigma_s;
    (dm1 + q) * (t - 1.0) + f * (1.0 - q) * (t + dm1)
}

/// Explicit coating of a perfectly conducting b_D = 0 domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoatingResult {
    pub map: ConformalMap,
    /// Radius of the circle whose image is the shell boundary.
    pub radius: f64,
    pub sigma_s: f64,
    pub sigma_m: f64,
    #[serde(with = "conductivity_serde")]
    pub sigma_c: f64,
}

impl CoatingResult {
    pub fn core_spec(&self) -> CurveSpec {
        CurveSpec::Conformal { map: self.map.clone(), radius: 1.0 }
    }

    pub fn shell_spec(&self) -> CurveSpec {
        CurveSpec::Conformal { map: self.map.clone(), radius: self.radius }
    }

    pub fn profile(&self) -> ConductivityProfile {
        ConductivityProfile { sigma_c: self.sigma_c, sigma_s: self.sigma_s, sigma_m: vec![self.sigma_m] }
    }

    /// Core and shell discretized with n nodes each.
    pub fn curves(&self, n: usize) -> Result<(BoundaryCurve, BoundaryCurve)> {
        Ok((build_curve(&self.core_spec(), n)?, build_curve(&self.shell_spec(), n)?))
    }

    /// Area fraction of the disk pair in the zeta plane, 1/r^2.
    pub fn disk_fraction(&self) -> f64 {
        1.0 / (self.radius * self.radius)
    }
}

pub const BD_ZERO_TOL: f64 = 1e-12;

/// Shell Phi(|zeta| = r) with r^2 = (1+sigma_s)/(1-sigma_s): the disk pair
/// (|zeta| < 1, |zeta| < r) is neutral, and for b_D = 0 the mapped pair has
/// vanishing polarization tensor.
pub fn construct_coating_bd0(map: &ConformalMap, sigma_s: f64) -> Result<CoatingResult> {
    let b = map.b_d().norm();
    if b > BD_ZERO_TOL {
        return Err(Error::BDNotZero(b));
    }
    if !(sigma_s > 0.0) || sigma_s.is_nan() {
        return Err(invalid(format!("shell conductivity must be positive, got {sigma_s}")));
    }
    if sigma_s >= 1.0 {
        return Err(Error::ShellTooConductive(sigma_s));
    }
    let radius = ((1.0 + sigma_s) / (1.0 - sigma_s)).sqrt();
    Ok(CoatingResult { map: map.clone(), radius, sigma_s, sigma_m: 1.0, sigma_c: f64::INFINITY })
}

/// Bonding parameter making a disk of radius r neutral:
/// beta = sigma_c sigma_m / (r (sigma_c - sigma_m)).
pub fn beta_disk(r: f64, sigma_c: f64, sigma_m: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) || !(sigma_m > 0.0 && sigma_m.is_finite()) {
        return Err(invalid("radius and matrix conductivity must be positive"));
    }
    if !(sigma_c > sigma_m) {
        return Err(Error::NonPositiveBeta(format!("sigma_c = {sigma_c} <= sigma_m = {sigma_m}")));
    }
    if sigma_c.is_infinite() {
        return Ok(sigma_m / r);
    }
    Ok(sigma_c * sigma_m / (r * (sigma_c - sigma_m)))
}

/// Admissibility bound on |b_D|.
pub fn bd_bound() -> f64 {
    2.0 - 3f64.sqrt()
}

/// How beta is defined along the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BondingProfile {
    /// beta |Phi'| = A + B cos 2(theta + rotation) with b = |b_D|.
    WeaklyNeutral { b: f64, rotation: f64 },
    /// beta = const
    Constant { value: f64 },
    /// beta |Phi'| = mean + amplitude cos 2(theta + rotation)
    Pulled { mean: f64, amplitude: f64, rotation: f64 },
}

/// Bonding parameter on Phi(|zeta| = 1), sampled at theta_k = 2 pi k / n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondingParameter {
    pub map: ConformalMap,
    pub profile: BondingProfile,
    pub samples: Vec<f64>,
    pub min: f64,
}

impl BondingParameter {
    pub fn constant(map: &ConformalMap, value: f64, n: usize) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveBeta(format!("constant value {value}")));
        }
        Self::sampled(map.clone(), BondingProfile::Constant { value }, n)
    }

    /// beta |Phi'| = mean + amplitude cos 2(theta + rotation).
    pub fn pulled(map: &ConformalMap, mean: f64, amplitude: f64, rotation: f64, n: usize) -> Result<Self> {
        Self::sampled(map.clone(), BondingProfile::Pulled { mean, amplitude, rotation }, n)
    }

    fn sampled(map: ConformalMap, profile: BondingProfile, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(invalid("at least 16 samples are required"));
        }
        let mut bp = Self { map, profile, samples: Vec::new(), min: 0.0 };
        bp.samples = (0..n).map(|k| bp.eval(2.0 * PI * k as f64 / n as f64)).collect();
        bp.min = bp.samples.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(bp.min > 0.0) {
            return Err(Error::NonPositiveBeta(format!("minimum sample {}", bp.min)));
        }
        Ok(bp)
    }

    /// beta(Phi(e^{i theta})) |Phi'(e^{i theta})|, the pulled-back parameter.
    pub fn pulled_back(&self, theta: f64) -> f64 {
        match self.profile {
            BondingProfile::WeaklyNeutral { b, rotation } => {
                let (a, bb) = gb_coefficients(b);
                a + bb * (2.0 * (theta + rotation)).cos()
            }
            BondingProfile::Pulled { mean, amplitude, rotation } => mean + amplitude * (2.0 * (theta + rotation)).cos(),
            BondingProfile::Constant { value } => {
                value * self.map.derivative(Complex64::from_polar(1.0, theta)).norm()
            }
        }
    }

    /// beta at the boundary point Phi(e^{i theta}).
    pub fn eval(&self, theta: f64) -> f64 {
        match self.profile {
            BondingProfile::Constant { value } => value,
            BondingProfile::WeaklyNeutral { .. } | BondingProfile::Pulled { .. } => {
                self.pulled_back(theta) / self.map.derivative(Complex64::from_polar(1.0, theta)).norm()
            }
        }
    }
}

/// Constant and cos 2 theta coefficients of beta |Phi'|.
pub fn gb_coefficients(b: f64) -> (f64, f64) {
    (1.0 / (1.0 + b) + 1.0 / (1.0 - b) - 1.0, 2.0 / (1.0 + b) - 2.0 / (1.0 - b))
}

/// Minimum over theta of the numerator of beta, (b^2 - 4b + 1)/(1 - b^2).
pub fn beta_numerator_min(b: f64) -> f64 {
    (b * b - 4.0 * b + 1.0) / (1.0 - b * b)
}

/// Bonding parameter
///   beta = (1/(1+b) + 1/(1-b) - 1 + (2/(1+b) - 2/(1-b)) cos 2 theta') / |Phi'(e^{i theta})|
/// with b = |b_D| and theta' measured in the frame where b_D is real and
/// non-negative, i.e. theta' = theta + tau with tau = -arg(b_D)/2.
pub fn beta_weakly_neutral(map: &ConformalMap, n: usize) -> Result<BondingParameter> {
    let b = map.b_d().norm();
    if b > bd_bound() - 1e-12 {
        return Err(Error::BDTooLarge(b));
    }
    let rotation = map.normalizing_rotation();
    BondingParameter::sampled(map.clone(), BondingProfile::WeaklyNeutral { b, rotation }, n)
}

/// Disk with an imperfect interface: u = c a.x inside and
/// u = a.x + d a.x r^2/|x|^2 outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LcDiskSolution {
    pub c: f64,
    pub d: f64,
}

/// Solves sigma_c c = sigma_m (1 - d) and beta r (1 + d - c) = sigma_m (1 - d).
/// `sigma_c` and `beta` may be infinite.
pub fn solve_lc_disk(r: f64, sigma_c: f64, sigma_m: f64, beta: f64) -> Result<LcDiskSolution> {
    if !(r > 0.0 && r.is_finite()) || !(sigma_m > 0.0 && sigma_m.is_finite()) {
        return Err(invalid("radius and matrix conductivity must be positive"));
    }
    if !(sigma_c > 0.0) || sigma_c.is_nan() || !(beta >= 0.0) || beta.is_nan() {
        return Err(invalid("need sigma_c > 0 and beta >= 0"));
    }
    match (sigma_c.is_infinite(), beta.is_infinite()) {
        (true, true) => Ok(LcDiskSolution { c: 0.0, d: -1.0 }),
        (true, false) => {
            let br = beta * r;
            Ok(LcDiskSolution { c: 0.0, d: (sigma_m - br) / (sigma_m + br) })
        }
        (false, true) => {
            let k = sigma_c / sigma_m;
            let d = (1.0 - k) / (1.0 + k);
            Ok(LcDiskSolution { c: 1.0 + d, d })
        }
        (false, false) => {
            let br = beta * r;
            // [sigma_c, sigma_m; -br, br + sigma_m] (c, d) = (sigma_m, sigma_m - br)
            let det = sigma_c * (br + sigma_m) + sigma_m * br;
            if det.abs() <= 1e-300 {
                return Err(Error::SingularSystem(format!("determinant {det}")));
            }
            let c = (sigma_m * (br + sigma_m) - sigma_m * (sigma_m - br)) / det;
            let d = (sigma_c * (sigma_m - br) + br * sigma_m) / det;
            Ok(LcDiskSolution { c, d })
        }
    }
}

/// Settings for the coating search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NewtonOptions {
    pub nodes: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Forward-difference step relative to r_e.
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { nodes: 256, tol: 1e-8, max_iter: 25, fd_step: 1e-5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewtonStep {
    pub iteration: usize,
    pub b: [f64; 3],
    /// ||M|| / |Omega| at b.
    pub residual: f64,
    pub damping: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoatingSearch {
    /// (b0, b1, b2) of r_e + b0 + b1 cos 2t + b2 sin 2t.
    pub b: [f64; 3],
    pub r_i: f64,
    pub r_e: f64,
    pub iterations: usize,
    pub residual: f64,
    pub tensor: PolarizationTensor,
    pub trace: Vec<NewtonStep>,
}

impl CoatingSearch {
    pub fn shell_perturbation(&self) -> TrigPoly {
        shell_poly(self.b)
    }
}

fn shell_poly(b: [f64; 3]) -> TrigPoly {
    TrigPoly { cos: vec![b[0], 0.0, b[1]], sin: vec![0.0, 0.0, b[2]] }
}

/// Damped Newton search for (b0, b1, b2) such that the core r_i + h and
/// shell r_e + b0 + b1 cos 2t + b2 sin 2t have vanishing polarization
/// tensor. r_e comes from the concentric neutrality condition.
pub fn find_coating_perturbed_disk(
    h: &TrigPoly,
    sigma_c: f64,
    sigma_s: f64,
    sigma_m: f64,
    r_i: f64,
    options: &NewtonOptions,
) -> Result<CoatingSearch> {
    if !(r_i > 0.0 && r_i.is_finite()) {
        return Err(invalid("core radius must be positive"));
    }
    let profile = ConductivityProfile::new(sigma_c, sigma_s, sigma_m)?;
    let f = neutral_volume_fraction(sigma_c, sigma_s, sigma_m, 2)?;
    let r_e = r_i / f.sqrt();
    let core = build_curve(&CurveSpec::PerturbedDisk { radius: r_i, perturbation: h.clone() }, options.nodes)?;

    let evaluate = |b: [f64; 3]| -> Result<(PolarizationTensor, [f64; 3], f64)> {
        let shell =
            build_curve(&CurveSpec::PerturbedDisk { radius: r_e, perturbation: shell_poly(b) }, options.nodes)?;
        let m = pt_coreshell(&core, &shell, &profile)?;
        let area = m.shell_area.unwrap_or(PI * r_e * r_e);
        let v = [m.matrix[0][0], m.matrix[1][1], 0.5 * (m.matrix[0][1] + m.matrix[1][0])];
        let res = m.norm() / area;
        Ok((m, v, res))
    };

    let mut b = [0.0; 3];
    let (mut tensor, mut fval, mut res) = evaluate(b)?;
    let mut trace = vec![NewtonStep { iteration: 0, b, residual: res, damping: 0.0 }];
    let step = options.fd_step * r_e;
    let mut iter = 0;
    while res > options.tol {
        if iter >= options.max_iter {
            return Err(Error::NoConvergence { iterations: iter, residual: res });
        }
        iter += 1;
        let mut jac = nalgebra::Matrix3::<f64>::zeros();
        for j in 0..3 {
            let mut bp = b;
            bp[j] += step;
            let (_, fp, _) = evaluate(bp)?;
            for i in 0..3 {
                jac[(i, j)] = (fp[i] - fval[i]) / step;
            }
        }
        let delta = jac
            .lu()
            .solve(&nalgebra::Vector3::from(fval))
            .ok_or_else(|| Error::SingularSystem("coating Jacobian is singular".into()))?;
        let mut damping = 1.0;
        let mut accepted = None;
        for _ in 0..12 {
            let trial = [b[0] - damping * delta[0], b[1] - damping * delta[1], b[2] - damping * delta[2]];
            match evaluate(trial) {
                Ok(out) if out.2 < res => {
                    accepted = Some((trial, out));
                    break;
                }
                _ => damping *= 0.5,
            }
        }
        let Some((trial, (m, v, r))) = accepted else {
            return Err(Error::NoConvergence { iterations: iter, residual: res });
        };
        b = trial;
        tensor = m;
        fval = v;
        res = r;
        log::debug!("coating search step {iter}: b = {b:?}, residual {res:e}");
        trace.push(NewtonStep { iteration: iter, b, residual: res, damping });
    }
    Ok(CoatingSearch { b, r_i, r_e, iterations: iter, residual: res, tensor, trace })
}

/// Anisotropic matrix conductivity that makes a confocal pair neutral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfocalConductivity {
    pub sigma_m: [f64; 3],
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub gamma: f64,
    pub volume_fraction: f64,
    /// min_j f^{-1} / (|1 - 2 alpha_j| + 1)
    pub gamma_bound: f64,
    /// Trace form of the neutrality condition; `None` when sigma_c = sigma_s.
    pub trace_residual: Option<f64>,
}

/// beta_j = -gamma / (2 alpha_j gamma + 1/f), sigma_m,j = sigma_s (1 + beta_j).
pub fn confocal_matrix_conductivity(c2: [f64; 3], rho0: f64, sigma_c: f64, sigma_s: f64) -> Result<ConfocalConductivity> {
    let pair = EllipsoidPair::new(c2, rho0)?;
    if !(c2[0] >= c2[1] && c2[1] >= c2[2]) {
        return Err(invalid(format!("squared semi-axes must be ordered c1 >= c2 >= c3, got {c2:?}")));
    }
    if !(sigma_s > 0.0 && sigma_s.is_finite()) || !(sigma_c > 0.0) {
        return Err(invalid("conductivities must be positive"));
    }
    let alpha = alpha_coefficients(rho0, &c2)?;
    let f = pair.volume_fraction();
    let gamma = 1.0 - sigma_c / sigma_s;
    let bound = alpha.iter().map(|a| (1.0 / f) / ((1.0 - 2.0 * a).abs() + 1.0)).fold(f64::INFINITY, f64::min);
    if !(gamma.abs() <= bound) {
        return Err(Error::GammaTooLarge { gamma: gamma.abs(), bound });
    }
    let beta = alpha.map(|a| -gamma / (2.0 * a * gamma + 1.0 / f));
    let sigma_m = beta.map(|b| sigma_s * (1.0 + b));
    if sigma_m.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::NoPositiveSolution(sigma_m.iter().cloned().fold(f64::INFINITY, f64::min)));
    }
    let trace_residual = (gamma != 0.0).then(|| {
        (2.0 * sigma_s + sigma_c) / (sigma_s - sigma_c)
            + f / 3.0 * sigma_m.iter().map(|m| (m + 2.0 * sigma_s) / (m - sigma_s)).sum::<f64>()
    });
    Ok(ConfocalConductivity { sigma_m, alpha, beta, gamma, volume_fraction: f, gamma_bound: bound, trace_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn concentric_conductivity() {
        let m = neutral_matrix_conductivity(5.0, 2.0, 0.25, 2).unwrap();
        assert_relative_eq!(m, 2.48, epsilon = 1e-14);
        assert!(neutrality_residual(5.0, 2.0, m, 0.25, 2).abs() < 1e-12);
        assert_eq!(neutral_matrix_conductivity(2.0, 2.0, 0.3, 3).unwrap(), 2.0);
        let inf = neutral_matrix_conductivity(f64::INFINITY, 1.0, 0.25, 2).unwrap();
        assert_relative_eq!(inf, 1.25 / 0.75, epsilon = 1e-14);
        assert_relative_eq!(neutral_volume_fraction(5.0, 2.0, m, 2).unwrap(), 0.25, epsilon = 1e-14);
        let m3 = neutral_matrix_conductivity(5.0, 2.0, 0.125, 3).unwrap();
        assert!(neutrality_residual(5.0, 2.0, m3, 0.125, 3).abs() < 1e-12);
    }

    #[test]
    fn bd0_coating_radius() {
        let map = ConformalMap::monomial(2, Complex64::new(0.25, 0.0)).unwrap();
        let c = construct_coating_bd0(&map, 0.5).unwrap();
        assert_relative_eq!(c.radius, 3f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(construct_coating_bd0(&map, 1.0), Err(Error::ShellTooConductive(_))));
        let big = construct_coating_bd0(&map, 0.99).unwrap();
        assert_relative_eq!(big.radius, 199f64.sqrt(), epsilon = 1e-12);
        let ell = ConformalMap::monomial(1, Complex64::new(0.1, 0.0)).unwrap();
        assert!(matches!(construct_coating_bd0(&ell, 0.5), Err(Error::BDNotZero(_))));
    }

    #[test]
    fn disk_bonding_values() {
        assert_relative_eq!(beta_disk(1.0, 2.0, 1.0).unwrap(), 2.0);
        assert_relative_eq!(beta_disk(2.0, 3.0, 1.0).unwrap(), 0.75);
        assert_relative_eq!(beta_disk(1.0, f64::INFINITY, 1.0).unwrap(), 1.0);
        assert!(matches!(beta_disk(1.0, 1.0, 1.0), Err(Error::NonPositiveBeta(_))));
    }

    #[test]
    fn weakly_neutral_beta() {
        let id = beta_weakly_neutral(&ConformalMap::identity(), 64).unwrap();
        assert!(id.samples.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let map = ConformalMap::monomial(1, Complex64::new(0.1, 0.0)).unwrap();
        let bp = beta_weakly_neutral(&map, 256).unwrap();
        assert!(bp.min > 0.0);
        let edge = ConformalMap::monomial(1, Complex64::new(bd_bound(), 0.0)).unwrap();
        assert!(matches!(beta_weakly_neutral(&edge, 64), Err(Error::BDTooLarge(_))));
        // numerator minimum matches the closed form
        let b = 0.2;
        let (a, bb) = gb_coefficients(b);
        assert_relative_eq!(a - bb.abs(), beta_numerator_min(b), epsilon = 1e-14);
    }

    #[test]
    fn rotation_of_bd_is_absorbed() {
        let phase = Complex64::from_polar(1.0, 0.7);
        let map = ConformalMap::monomial(1, phase * 0.15).unwrap();
        let real = ConformalMap::monomial(1, Complex64::new(0.15, 0.0)).unwrap();
        let rotated = beta_weakly_neutral(&map, 64).unwrap();
        let base = beta_weakly_neutral(&real, 64).unwrap();
        // the point Phi(e^{i theta}) corresponds to theta + tau in the real frame
        let tau = map.normalizing_rotation();
        for t in [0.0, 0.4, 2.2] {
            assert_relative_eq!(rotated.eval(t), base.eval(t + tau), epsilon = 1e-13);
        }
    }

    #[test]
    fn lc_disk_limits() {
        let beta = beta_disk(1.5, 3.0, 1.0).unwrap();
        let s = solve_lc_disk(1.5, 3.0, 1.0, beta).unwrap();
        assert!(s.d.abs() < 1e-14);
        assert_relative_eq!(s.c, 1.0 / 3.0, epsilon = 1e-14);
        let s = solve_lc_disk(1.0, 3.0, 1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(s.d, -0.5, epsilon = 1e-15);
        let s = solve_lc_disk(1.0, 3.0, 1.0, 0.0).unwrap();
        assert_eq!((s.c, s.d), (0.0, 1.0));
        let big = solve_lc_disk(1.0, 3.0, 1.0, 1e12).unwrap();
        assert!((big.d + 0.5).abs() < 1e-10);
    }

    #[test]
    fn confocal_conductivity_for_balls() {
        let r = confocal_matrix_conductivity([1.0; 3], 3.0, 3.0, 2.0).unwrap();
        for a in r.alpha {
            assert_relative_eq!(a, -7.0 / 6.0, max_relative = 1e-12);
        }
        let expect = neutral_matrix_conductivity(3.0, 2.0, 0.125, 3).unwrap();
        for s in r.sigma_m {
            assert_relative_eq!(s, expect, max_relative = 1e-12);
        }
        assert!(r.trace_residual.unwrap().abs() < 1e-10);
        let h = confocal_matrix_conductivity([4.0, 2.0, 1.0], 2.0, 1.5, 1.5).unwrap();
        assert_eq!(h.sigma_m, [1.5; 3]);
        assert_eq!(h.trace_residual, None);
        assert!(matches!(
            confocal_matrix_conductivity([4.0, 2.0, 1.0], 2.0, 100.0, 1.0),
            Err(Error::GammaTooLarge { .. })
        ));
    }
}
