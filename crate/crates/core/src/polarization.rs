//! Polarization tensors of simple and core-shell planar inclusions and the
//! Hashin-Shtrikman trace bounds.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::geometry::{curve_area, BoundaryCurve};
use crate::layer_potentials::{dns_cross_matrix, np_matrix};
use crate::linalg::{log_if_ill_conditioned, DenseSolver};

/// Serde helpers for conductivities that may be `f64::INFINITY`,
/// written as the string `"inf"`.
pub mod conductivity_serde {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match v {
                Some(x) => super::serialize(x, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
            #[derive(Deserialize)]
            struct W(#[serde(with = "super")] f64);
            Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixPhase {
    Isotropic(f64),
    Diagonal(Vec<f64>),
}

fn deserialize_matrix_phase<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    Ok(match MatrixPhase::deserialize(d)? {
        MatrixPhase::Isotropic(v) => vec![v],
        MatrixPhase::Diagonal(v) => v,
    })
}

fn serialize_matrix_phase<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.len() == 1 {
        s.serialize_f64(v[0])
    } else {
        v.serialize(s)
    }
}

/// Core, shell and matrix conductivities. `sigma_c` may be infinite
/// (perfect conductor); `sigma_m` is either one value or a diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductivityProfile {
    #[serde(with = "conductivity_serde")]
    pub sigma_c: f64,
    pub sigma_s: f64,
    #[serde(serialize_with = "serialize_matrix_phase", deserialize_with = "deserialize_matrix_phase")]
    pub sigma_m: Vec<f64>,
}

impl ConductivityProfile {
    pub fn new(sigma_c: f64, sigma_s: f64, sigma_m: f64) -> Result<Self> {
        let p = Self { sigma_c, sigma_s, sigma_m: vec![sigma_m] };
        p.validate()?;
        Ok(p)
    }

    pub fn anisotropic(sigma_c: f64, sigma_s: f64, sigma_m: Vec<f64>) -> Result<Self> {
        let p = Self { sigma_c, sigma_s, sigma_m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_c > 0.0) || self.sigma_c.is_nan() {
            return Err(invalid(format!("core conductivity must be positive, got {}", self.sigma_c)));
        }
        if !(self.sigma_s > 0.0 && self.sigma_s.is_finite()) {
            return Err(invalid(format!("shell conductivity must be positive and finite, got {}", self.sigma_s)));
        }
        if self.sigma_m.is_empty() || self.sigma_m.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(invalid("matrix conductivities must be positive and finite"));
        }
        Ok(())
    }

    pub fn is_isotropic(&self) -> bool {
        self.sigma_m.iter().all(|v| *v == self.sigma_m[0])
    }

    /// The scalar matrix conductivity; error when anisotropic.
    pub fn sigma_m_scalar(&self) -> Result<f64> {
        if self.is_isotropic() {
            Ok(self.sigma_m[0])
        } else {
            Err(invalid("an isotropic matrix conductivity is required"))
        }
    }

    /// 1 / lambda = 2(sigma_c - sigma_s)/(sigma_c + sigma_s); 2 for a perfect core.
    pub fn inv_lambda(&self) -> f64 {
        if self.sigma_c.is_infinite() {
            2.0
        } else {
            2.0 * (self.sigma_c - self.sigma_s) / (self.sigma_c + self.sigma_s)
        }
    }

    /// lambda = (sigma_c + sigma_s)/(2(sigma_c - sigma_s)).
    pub fn lambda(&self) -> Result<f64> {
        if self.sigma_c == self.sigma_s {
            return Err(invalid("lambda is undefined for sigma_c = sigma_s"));
        }
        Ok(1.0 / self.inv_lambda())
    }

    /// 1 / mu = 2(sigma_s - sigma_m)/(sigma_s + sigma_m).
    pub fn inv_mu(&self) -> Result<f64> {
        let m = self.sigma_m_scalar()?;
        Ok(2.0 * (self.sigma_s - m) / (self.sigma_s + m))
    }

    /// mu = (sigma_s + sigma_m)/(2(sigma_s - sigma_m)).
    pub fn mu(&self) -> Result<f64> {
        let m = self.sigma_m_scalar()?;
        if m == self.sigma_s {
            return Err(invalid("mu is undefined for sigma_s = sigma_m"));
        }
        Ok(1.0 / self.inv_mu()?)
    }

    /// beta_j = sigma_m,j / sigma_s - 1.
    pub fn beta(&self) -> Vec<f64> {
        self.sigma_m.iter().map(|m| m / self.sigma_s - 1.0).collect()
    }

    /// gamma = 1 - sigma_c / sigma_s.
    pub fn gamma(&self) -> f64 {
        1.0 - self.sigma_c / self.sigma_s
    }
}

/// Symmetric 2x2 polarization tensor with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizationTensor {
    /// Row l holds (m_l1, m_l2).
    pub matrix: [[f64; 2]; 2],
    pub dimension: usize,
    /// |D|
    pub core_area: f64,
    /// |Omega| for core-shell structures.
    pub shell_area: Option<f64>,
    /// sigma_c / sigma_m for simple inclusions.
    #[serde(with = "conductivity_serde::option", default)]
    pub contrast: Option<f64>,
    /// Set when the contrast is 1 and the tensor is zero without a solve.
    #[serde(default)]
    pub singular_contrast: bool,
    /// Largest relative mean of the solution densities.
    pub density_mean: f64,
    /// Lower bound on the 1-norm condition number of the solved system.
    pub condition_estimate: f64,
}

impl PolarizationTensor {
    pub fn as_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.matrix[0][0], self.matrix[0][1], self.matrix[1][0], self.matrix[1][1])
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.as_matrix().norm()
    }

    pub fn trace(&self) -> f64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    /// ||M - M^T|| / ||M||, zero for the zero tensor.
    pub fn asymmetry(&self) -> f64 {
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        (self.matrix[0][1] - self.matrix[1][0]).abs() * std::f64::consts::SQRT_2 / n
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = self.as_matrix();
        let s = (m + m.transpose()) * 0.5;
        let e = s.symmetric_eigenvalues();
        let (a, b) = (e[0], e[1]);
        if a <= b { [a, b] } else { [b, a] }
    }
}

/// Densities phi^(l), l = 1, 2 on a simple inclusion together with its tensor.
#[derive(Clone, Debug)]
pub struct SimpleSolution {
    pub densities: [Vec<f64>; 2],
    pub tensor: PolarizationTensor,
}

/// Densities (phi_1^(l), phi_2^(l)) on the core and shell boundaries.
#[derive(Clone, Debug)]
pub struct CoreShellSolution {
    pub core: [Vec<f64>; 2],
    pub shell: [Vec<f64>; 2],
    pub tensor: PolarizationTensor,
}

fn moments(curve: &BoundaryCurve, phi: &[f64]) -> [f64; 2] {
    let (mut a, mut b) = (0.0, 0.0);
    for (k, v) in phi.iter().enumerate() {
        let w = curve.weight(k) * v;
        a += curve.points[k][0] * w;
        b += curve.points[k][1] * w;
    }
    [a, b]
}

fn relative_mean(curve: &BoundaryCurve, phi: &[f64]) -> f64 {
    let max = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return 0.0;
    }
    let s: f64 = phi.iter().enumerate().map(|(k, v)| v * curve.weight(k)).sum();
    s.abs() / (curve.perimeter() * max)
}

/// Adds c * (1/|C|) 1 w^T to the diagonal block starting at `offset`; this
/// pins int phi = 0 without changing mean-zero solutions.
fn add_mean_constraint(a: &mut DMatrix<f64>, curve: &BoundaryCurve, offset: usize, c: f64) {
    let n = curve.len();
    let scale = c / curve.perimeter();
    for j in 0..n {
        let wj = curve.weight(j) * scale;
        for i in 0..n {
            a[(offset + i, offset + j)] += wj;
        }
    }
}

/// Solves (lambda I - K*) phi^(l) = nu_l with lambda = (k+1)/(2(k-1)).
pub fn solve_simple(curve: &BoundaryCurve, k: f64) -> Result<SimpleSolution> {
    if !(k > 0.0) || k.is_nan() {
        return Err(invalid(format!("contrast must be positive, got {k}")));
    }
    let n = curve.len();
    let area = curve_area(curve);
    if k == 1.0 {
        return Ok(SimpleSolution {
            densities: [vec![0.0; n], vec![0.0; n]],
            tensor: PolarizationTensor {
                matrix: [[0.0; 2]; 2],
                dimension: 2,
                core_area: area,
                shell_area: None,
                contrast: Some(k),
                singular_contrast: true,
                density_mean: 0.0,
                condition_estimate: 1.0,
            },
        });
    }
    let inv_lambda = if k.is_infinite() { 2.0 } else { 2.0 * (k - 1.0) / (k + 1.0) };
    // (I - lambda^{-1} K*) phi = lambda^{-1} nu
    let mut a = np_matrix(curve).matrix * (-inv_lambda);
    for i in 0..n {
        a[(i, i)] += 1.0;
    }
    if k.is_infinite() {
        add_mean_constraint(&mut a, curve, 0, inv_lambda);
    }
    let solver = DenseSolver::new(a)?;
    let rhs: [Vec<f64>; 2] =
        [0, 1].map(|l| curve.normals.iter().map(|nu| inv_lambda * nu[l]).collect());
    let phi = [solver.solve(&rhs[0])?, solver.solve(&rhs[1])?];
    let cond = solver.condition_estimate(&[(&rhs[0], &phi[0]), (&rhs[1], &phi[1])]);
    log_if_ill_conditioned(cond, "simple inclusion system");
    let matrix = [moments(curve, &phi[0]), moments(curve, &phi[1])];
    let density_mean = relative_mean(curve, &phi[0]).max(relative_mean(curve, &phi[1]));
    Ok(SimpleSolution {
        densities: phi,
        tensor: PolarizationTensor {
            matrix,
            dimension: 2,
            core_area: area,
            shell_area: None,
            contrast: Some(k),
            singular_contrast: false,
            density_mean,
            condition_estimate: cond,
        },
    })
}

/// Polarization tensor of a simple inclusion with contrast k = sigma_c / sigma_m.
pub fn pt_simple(curve: &BoundaryCurve, k: f64) -> Result<PolarizationTensor> {
    Ok(solve_simple(curve, k)?.tensor)
}

/// Solves the core-shell block system, with each block row scaled by
/// 1/lambda and 1/mu so that the degenerate parameter cases stay regular.
pub fn solve_coreshell(
    core: &BoundaryCurve,
    shell: &BoundaryCurve,
    profile: &ConductivityProfile,
) -> Result<CoreShellSolution> {
    profile.validate()?;
    let inv_mu = profile.inv_mu()?;
    let inv_lambda = profile.inv_lambda();
    if !core.points.iter().all(|&p| shell.contains(p)) {
        return Err(invalid("core curve is not inside the shell curve"));
    }
    let to_core = dns_cross_matrix(shell, core)?.matrix;
    let to_shell = dns_cross_matrix(core, shell)?.matrix;
    let (n1, n2) = (core.len(), shell.len());
    let kd = np_matrix(core).matrix;
    let ko = np_matrix(shell).matrix;

    let mut a = DMatrix::<f64>::zeros(n1 + n2, n1 + n2);
    a.view_mut((0, 0), (n1, n1)).copy_from(&(kd * inv_lambda));
    a.view_mut((0, n1), (n1, n2)).copy_from(&(to_core * inv_lambda));
    a.view_mut((n1, 0), (n2, n1)).copy_from(&(to_shell * inv_mu));
    a.view_mut((n1, n1), (n2, n2)).copy_from(&(ko * inv_mu));
    for i in 0..n1 + n2 {
        a[(i, i)] -= 1.0;
    }
    if profile.sigma_c.is_infinite() {
        add_mean_constraint(&mut a, core, 0, inv_lambda);
    }

    let rhs: [Vec<f64>; 2] = [0, 1].map(|l| {
        core.normals
            .iter()
            .map(|nu| -inv_lambda * nu[l])
            .chain(shell.normals.iter().map(|nu| -inv_mu * nu[l]))
            .collect()
    });
    let solver = DenseSolver::new(a)?;
    let sol = [solver.solve(&rhs[0])?, solver.solve(&rhs[1])?];
    let cond = solver.condition_estimate(&[(&rhs[0], &sol[0]), (&rhs[1], &sol[1])]);
    log_if_ill_conditioned(cond, "core-shell system");

    let split = |v: &Vec<f64>| (v[..n1].to_vec(), v[n1..].to_vec());
    let (c0, s0) = split(&sol[0]);
    let (c1, s1) = split(&sol[1]);
    let row = |c: &[f64], s: &[f64]| {
        let a = moments(core, c);
        let b = moments(shell, s);
        [a[0] + b[0], a[1] + b[1]]
    };
    let matrix = [row(&c0, &s0), row(&c1, &s1)];
    let density_mean = [
        relative_mean(core, &c0),
        relative_mean(core, &c1),
        relative_mean(shell, &s0),
        relative_mean(shell, &s1),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(CoreShellSolution {
        core: [c0, c1],
        shell: [s0, s1],
        tensor: PolarizationTensor {
            matrix,
            dimension: 2,
            core_area: curve_area(core),
            shell_area: Some(curve_area(shell)),
            contrast: None,
            singular_contrast: false,
            density_mean,
            condition_estimate: cond,
        },
    })
}

/// Polarization tensor of the core-shell structure (core, shell).
pub fn pt_coreshell(
    core: &BoundaryCurve,
    shell: &BoundaryCurve,
    profile: &ConductivityProfile,
) -> Result<PolarizationTensor> {
    Ok(solve_coreshell(core, shell, profile)?.tensor)
}

/// Slacks in the two trace bounds, oriented so that both are
/// non-negative for every admissible inclusion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsReport {
    pub upper_slack: f64,
    pub lower_slack: f64,
    pub attains_lower: bool,
}

pub const HS_ATTAINMENT_TOL: f64 = 1e-6;

/// Hashin-Shtrikman check of a simple-inclusion tensor.
///
/// For k > 1 the slacks are |D|(k-1)(d-1+1/k) - Tr M and
/// (d-1+k)/(k-1) - |D| Tr M^{-1}; for k < 1 both inequalities reverse
/// and the slacks are negated.
pub fn hs_check(m: &PolarizationTensor, k: f64, area: f64) -> Result<HsReport> {
    if !(k > 0.0 && k.is_finite()) || k == 1.0 {
        return Err(invalid(format!("contrast must be positive, finite and not 1, got {k}")));
    }
    if !(area > 0.0) {
        return Err(invalid("area must be positive"));
    }
    let ev = m.eigenvalues();
    let sign = (k - 1.0).signum();
    if ev.iter().any(|e| e * sign <= 0.0) {
        return Err(Error::NotDefinite(ev));
    }
    let d = m.dimension as f64;
    let mm = m.as_matrix();
    let sym = (mm + mm.transpose()) * 0.5;
    let inv = sym.try_inverse().ok_or(Error::NotDefinite(ev))?;
    let upper_slack = sign * (area * (k - 1.0) * (d - 1.0 + 1.0 / k) - m.trace());
    let lower_slack = sign * ((d - 1.0 + k) / (k - 1.0) - area * inv.trace());
    Ok(HsReport { upper_slack, lower_slack, attains_lower: lower_slack <= HS_ATTAINMENT_TOL })
}
