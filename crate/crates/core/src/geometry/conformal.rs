use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

const CONSTRUCTOR_PROBES: usize = 2048;
/// |Phi'| below this on a probe grid counts as a vanishing derivative.
pub(crate) const DERIVATIVE_FLOOR: f64 = 1e-8;

/// Exterior conformal map Phi(zeta) = zeta + sum_{n>=1} b_n zeta^{-n},
/// from |zeta| > 1 onto the exterior of a planar domain.
///
/// The leading coefficient is fixed to 1 and the constant term to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct ConformalMap {
    coefficients: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    /// b_1, b_2, ... as [re, im] pairs
    coefficients: Vec<Complex64>,
}

impl TryFrom<MapRepr> for ConformalMap {
    type Error = Error;
    fn try_from(r: MapRepr) -> Result<Self> {
        ConformalMap::new(r.coefficients)
    }
}

impl From<ConformalMap> for MapRepr {
    fn from(m: ConformalMap) -> Self {
        MapRepr { coefficients: m.coefficients }
    }
}

impl ConformalMap {
    /// `coefficients[k]` is b_{k+1}.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid("conformal map coefficients must be finite"));
        }
        let map = Self { coefficients };
        if map.area() <= 0.0 {
            return Err(invalid(format!(
                "enclosed area pi(1 - sum n|b_n|^2) = {} is not positive",
                map.area()
            )));
        }
        let min = map.min_derivative(1.0, CONSTRUCTOR_PROBES);
        if min <= DERIVATIVE_FLOOR {
            return Err(Error::NonInjectiveMap { min_derivative: min });
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        Self { coefficients: Vec::new() }
    }

    /// Phi(zeta) = zeta + b / zeta^n.
    pub fn monomial(n: usize, b: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("monomial power must be at least 1"));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[n - 1] = b;
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// The coefficient of zeta^{-1}.
    pub fn b_d(&self) -> Complex64 {
        self.coefficients.first().copied().unwrap_or_default()
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let inv = zeta.inv();
        let mut acc = zeta;
        let mut p = inv;
        for b in &self.coefficients {
            acc += b * p;
            p *= inv;
        }
        acc
    }

    pub fn derivative(&self, zeta: Complex64) -> Complex64 {
        let inv = zeta.inv();
        let mut acc = Complex64::new(1.0, 0.0);
        let mut p = inv * inv;
        for (k, b) in self.coefficients.iter().enumerate() {
            let n = (k + 1) as f64;
            acc -= b * p * n;
            p *= inv;
        }
        acc
    }

    pub fn second_derivative(&self, zeta: Complex64) -> Complex64 {
        let inv = zeta.inv();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = inv * inv * inv;
        for (k, b) in self.coefficients.iter().enumerate() {
            let n = (k + 1) as f64;
            acc += b * p * (n * (n + 1.0));
            p *= inv;
        }
        acc
    }

    /// Area enclosed by the image of the unit circle.
    pub fn area(&self) -> f64 {
        let s: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, b)| (k + 1) as f64 * b.norm_sqr())
            .sum();
        PI * (1.0 - s)
    }

    pub(crate) fn min_derivative(&self, radius: f64, probes: usize) -> f64 {
        (0..probes)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / probes as f64;
                self.derivative(Complex64::from_polar(radius, t)).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// The same domain rotated by `angle` about the origin:
    /// e^{i angle} Phi(e^{-i angle} zeta).
    pub fn rotated(&self, angle: f64) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, b)| b * Complex64::from_polar(1.0, (k as f64 + 2.0) * angle))
            .collect();
        Self { coefficients }
    }

    /// Rotation angle tau that makes b_D real and non-negative in the
    /// rotated frame `rotated(tau)`.
    pub fn normalizing_rotation(&self) -> f64 {
        let b = self.b_d();
        if b.norm() == 0.0 { 0.0 } else { -0.5 * b.arg() }
    }

    /// Inverse map: the zeta with |zeta| >= 1 and Phi(zeta) = z.
    /// Newton iteration started from zeta = z, adequate away from the
    /// boundary image.
    pub fn invert(&self, z: Complex64) -> Option<Complex64> {
        if self.coefficients.is_empty() {
            return Some(z);
        }
        let mut zeta = if z.norm() > 1.0 { z } else { z / z.norm().max(1e-300) * 1.01 };
        for _ in 0..100 {
            let f = self.eval(zeta) - z;
            let d = self.derivative(zeta);
            let mut step = f / d;
            // keep the iterate in the exterior of the unit disk
            let mut damped = zeta - step;
            let mut tries = 0;
            while damped.norm() < 1.0 && tries < 30 {
                step *= 0.5;
                damped = zeta - step;
                tries += 1;
            }
            zeta = damped;
            if step.norm() < 1e-15 * zeta.norm() {
                return Some(zeta);
            }
        }
        let res = (self.eval(zeta) - z).norm();
        (res < 1e-12 * z.norm().max(1.0)).then_some(zeta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_bd_and_unit_derivative() {
        let m = ConformalMap::identity();
        assert_eq!(m.b_d(), Complex64::new(0.0, 0.0));
        assert!((m.derivative(Complex64::new(0.3, 1.2)) - 1.0).norm() < 1e-15);
        assert!((m.area() - PI).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = ConformalMap::new(vec![
            Complex64::new(0.1, 0.05),
            Complex64::new(0.25, 0.0),
            Complex64::new(0.0, -0.03),
        ])
        .unwrap();
        let z = Complex64::new(1.1, 0.4);
        let h = 1e-6;
        let fd = (m.eval(z + h) - m.eval(z - h)) / (2.0 * h);
        assert!((fd - m.derivative(z)).norm() < 1e-9);
        let fd2 = (m.derivative(z + h) - m.derivative(z - h)) / (2.0 * h);
        assert!((fd2 - m.second_derivative(z)).norm() < 1e-8);
    }

    #[test]
    fn vanishing_derivative_is_rejected() {
        // zeta + 1/(2 zeta^2) has Phi'(zeta) = 1 - zeta^{-3}, zero at zeta = 1
        let err = ConformalMap::monomial(2, Complex64::new(0.5, 0.0)).unwrap_err();
        assert!(matches!(err, Error::NonInjectiveMap { .. }));
    }

    #[test]
    fn rotation_normalizes_bd() {
        let m = ConformalMap::new(vec![Complex64::from_polar(0.2, 1.1), Complex64::new(0.05, 0.0)])
            .unwrap();
        let r = m.rotated(m.normalizing_rotation());
        assert!(r.b_d().im.abs() < 1e-15 && (r.b_d().re - 0.2).abs() < 1e-15);
        let z = Complex64::new(1.7, -0.4);
        let rot = Complex64::from_polar(1.0, 0.37);
        assert!((m.rotated(0.37).eval(z) - rot * m.eval(z / rot)).norm() < 1e-14);
    }

    #[test]
    fn inverse_round_trips() {
        let m = ConformalMap::monomial(2, Complex64::new(0.25, 0.0)).unwrap();
        for z in [Complex64::new(3.0, 1.0), Complex64::new(-1.2, 1.5), Complex64::new(0.0, -2.0)] {
            let zeta = m.invert(z).unwrap();
            assert!((m.eval(zeta) - z).norm() < 1e-12);
            assert!(zeta.norm() > 1.0);
        }
    }
}
