use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;

use super::conformal::{ConformalMap, DERIVATIVE_FLOOR};
use crate::error::{invalid, Error, Result};

/// Real trigonometric polynomial h(t) = sum_k cos[k] cos(k t) + sin[k] sin(k t).
///
/// `sin[0]` is ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c cos(k t)
    pub fn cosine(k: usize, c: f64) -> Self {
        let mut cos = vec![0.0; k + 1];
        cos[k] = c;
        Self { cos, sin: Vec::new() }
    }

    /// c sin(k t)
    pub fn sine(k: usize, c: f64) -> Self {
        let mut sin = vec![0.0; k + 1];
        sin[k] = c;
        Self { cos: Vec::new(), sin }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let zip = |a: &[f64], b: &[f64]| {
            (0..a.len().max(b.len()))
                .map(|i| a.get(i).unwrap_or(&0.0) + b.get(i).unwrap_or(&0.0))
                .collect::<Vec<_>>()
        };
        TrigPoly { cos: zip(&self.cos, &other.cos), sin: zip(&self.sin, &other.sin) }
    }

    /// Value, first and second derivative at t.
    pub fn eval3(&self, t: f64) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (k, c) in self.cos.iter().enumerate() {
            let kf = k as f64;
            let (s, co) = (kf * t).sin_cos();
            v += c * co;
            d1 -= c * kf * s;
            d2 -= c * kf * kf * co;
        }
        for (k, c) in self.sin.iter().enumerate().skip(1) {
            let kf = k as f64;
            let (s, co) = (kf * t).sin_cos();
            v += c * s;
            d1 += c * kf * co;
            d2 -= c * kf * kf * s;
        }
        (v, d1, d2)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval3(t).0
    }

    /// h(t - angle), i.e. the graph rotated by `angle`.
    pub fn rotated(&self, angle: f64) -> TrigPoly {
        let n = self.cos.len().max(self.sin.len());
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        for k in 0..n {
            let a = *self.cos.get(k).unwrap_or(&0.0);
            let b = if k == 0 { 0.0 } else { *self.sin.get(k).unwrap_or(&0.0) };
            let (s, c) = (k as f64 * angle).sin_cos();
            // a cos k(t-x) + b sin k(t-x)
            cos[k] = a * c - b * s;
            sin[k] = a * s + b * c;
        }
        if n > 0 {
            sin[0] = 0.0;
        }
        TrigPoly { cos, sin }
    }

    pub fn max_abs(&self, probes: usize) -> f64 {
        (0..probes)
            .map(|j| self.eval(2.0 * PI * j as f64 / probes as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Description of a smooth closed curve, serialized with a `kind` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    /// Image of |zeta| = radius under the map.
    Conformal {
        map: ConformalMap,
        #[serde(default = "one")]
        radius: f64,
    },
    /// Polar curve r(t) = radius + h(t).
    PerturbedDisk {
        radius: f64,
        #[serde(default)]
        perturbation: TrigPoly,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Circle {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// (x^2+y^2)^2 = alpha^2 (x^2+y^2) + 4 eps^2 x^2, i.e. r^2 = alpha^2 + 4 eps^2 cos^2 t.
    NeumannOval { alpha: f64, epsilon: f64 },
}

fn one() -> f64 {
    1.0
}

impl CurveSpec {
    pub fn conformal(map: ConformalMap) -> Self {
        CurveSpec::Conformal { map, radius: 1.0 }
    }

    pub fn circle(radius: f64) -> Self {
        CurveSpec::Circle { radius, center: [0.0; 2] }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        CurveSpec::Ellipse { a, b, center: [0.0; 2] }
    }

    fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            CurveSpec::Conformal { radius, .. } => pos(*radius, "radius"),
            CurveSpec::PerturbedDisk { radius, perturbation } => {
                pos(*radius, "radius")?;
                if perturbation.cos.iter().chain(&perturbation.sin).any(|c| !c.is_finite()) {
                    return Err(invalid("perturbation coefficients must be finite"));
                }
                Ok(())
            }
            CurveSpec::Ellipse { a, b, center } => {
                pos(*a, "a")?;
                pos(*b, "b")?;
                finite_point(center)
            }
            CurveSpec::Circle { radius, center } => {
                pos(*radius, "radius")?;
                finite_point(center)
            }
            CurveSpec::NeumannOval { alpha, epsilon } => {
                pos(*alpha, "alpha")?;
                if !(epsilon.is_finite() && *epsilon >= 0.0) {
                    return Err(invalid(format!("epsilon must be non-negative, got {epsilon}")));
                }
                Ok(())
            }
        }
    }

    /// Position, first and second derivative with respect to the parameter.
    fn eval3(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        match self {
            CurveSpec::Conformal { map, radius } => {
                let zeta = Complex64::from_polar(*radius, t);
                let iz = Complex64::i() * zeta;
                let d1 = map.derivative(zeta);
                let x = map.eval(zeta);
                let xp = d1 * iz;
                let xpp = map.second_derivative(zeta) * iz * iz - d1 * zeta;
                ([x.re, x.im], [xp.re, xp.im], [xpp.re, xpp.im])
            }
            CurveSpec::PerturbedDisk { radius, perturbation } => {
                let (h, h1, h2) = perturbation.eval3(t);
                polar3(radius + h, h1, h2, t)
            }
            CurveSpec::Ellipse { a, b, center } => {
                let (s, c) = t.sin_cos();
                ([center[0] + a * c, center[1] + b * s], [-a * s, b * c], [-a * c, -b * s])
            }
            CurveSpec::Circle { radius, center } => {
                let (s, c) = t.sin_cos();
                let r = *radius;
                ([center[0] + r * c, center[1] + r * s], [-r * s, r * c], [-r * c, -r * s])
            }
            CurveSpec::NeumannOval { alpha, epsilon } => {
                let e2 = epsilon * epsilon;
                let c = t.cos();
                let r = (alpha * alpha + 4.0 * e2 * c * c).sqrt();
                let r1 = -2.0 * e2 * (2.0 * t).sin() / r;
                let r2 = (-4.0 * e2 * (2.0 * t).cos() - r1 * r1) / r;
                polar3(r, r1, r2, t)
            }
        }
    }
}

fn finite_point(p: &[f64; 2]) -> Result<()> {
    if p.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(invalid("center must be finite"))
    }
}

fn polar3(r: f64, r1: f64, r2: f64, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let (s, c) = t.sin_cos();
    (
        [r * c, r * s],
        [r1 * c - r * s, r1 * s + r * c],
        [r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s],
    )
}

/// Equispaced discretization of a smooth, positively oriented closed curve.
///
/// Node k sits at parameter t_k = 2 pi k / N. Quadrature weights are
/// `2 pi / N * speed[k]`, the periodic trapezoidal rule in arclength.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub params: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub speed: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
    pub curvature: Vec<f64>,
    pub closed: bool,
}

impl BoundaryCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Arclength quadrature weight of node k.
    pub fn weight(&self, k: usize) -> f64 {
        2.0 * PI / self.len() as f64 * self.speed[k]
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.weight(k)).collect()
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|k| self.weight(k)).sum()
    }

    /// Unit tangent, counterclockwise.
    pub fn tangent(&self, k: usize) -> [f64; 2] {
        let n = self.normals[k];
        [-n[1], n[0]]
    }

    pub fn max_spacing(&self) -> f64 {
        self.speed.iter().cloned().fold(0.0, f64::max) * 2.0 * PI / self.len() as f64
    }

    pub fn centroid(&self) -> [f64; 2] {
        // first moments via Green's theorem: int x dA = 1/2 oint x^2 nu_1 dS
        let area = curve_area(self);
        let (mut mx, mut my) = (0.0, 0.0);
        for k in 0..self.len() {
            let [x, y] = self.points[k];
            let w = self.weight(k);
            mx += 0.5 * x * x * self.normals[k][0] * w;
            my += 0.5 * y * y * self.normals[k][1] * w;
        }
        [mx / area, my / area]
    }

    /// Largest distance of a node from `center`.
    pub fn circumradius(&self, center: [f64; 2]) -> f64 {
        self.points
            .iter()
            .map(|p| (p[0] - center[0]).hypot(p[1] - center[1]))
            .fold(0.0, f64::max)
    }

    pub fn distance_to(&self, p: [f64; 2]) -> f64 {
        self.points
            .iter()
            .map(|q| (p[0] - q[0]).hypot(p[1] - q[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding-number test against the node polygon.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let n = self.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = (self.points[i][0], self.points[i][1]);
            let (xj, yj) = (self.points[j][0], self.points[j][1]);
            if (yi > p[1]) != (yj > p[1]) && p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    /// Rigid rotation by `angle` about the origin; parametrization unchanged.
    pub fn rotated(&self, angle: f64) -> BoundaryCurve {
        let (s, c) = angle.sin_cos();
        let rot = |v: [f64; 2]| [c * v[0] - s * v[1], s * v[0] + c * v[1]];
        BoundaryCurve {
            params: self.params.clone(),
            points: self.points.iter().map(|&p| rot(p)).collect(),
            speed: self.speed.clone(),
            normals: self.normals.iter().map(|&n| rot(n)).collect(),
            curvature: self.curvature.clone(),
            closed: self.closed,
        }
    }

    /// Dilation by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> BoundaryCurve {
        BoundaryCurve {
            params: self.params.clone(),
            points: self.points.iter().map(|p| [p[0] * factor, p[1] * factor]).collect(),
            speed: self.speed.iter().map(|s| s * factor).collect(),
            normals: self.normals.clone(),
            curvature: self.curvature.iter().map(|k| k / factor).collect(),
            closed: self.closed,
        }
    }

    pub fn translated(&self, v: [f64; 2]) -> BoundaryCurve {
        let mut out = self.clone();
        for p in &mut out.points {
            p[0] += v[0];
            p[1] += v[1];
        }
        out
    }
}

/// Discretizes `spec` with `n` equispaced nodes.
pub fn build_curve(spec: &CurveSpec, n: usize) -> Result<BoundaryCurve> {
    if n < 16 || !n.is_multiple_of(2) {
        return Err(invalid(format!("node count must be even and at least 16, got {n}")));
    }
    spec.validate()?;
    let probes = 4 * n;
    match spec {
        CurveSpec::Conformal { map, radius } => {
            let min = map.min_derivative(*radius, probes);
            if min <= DERIVATIVE_FLOOR {
                return Err(Error::NonInjectiveMap { min_derivative: min });
            }
        }
        CurveSpec::PerturbedDisk { radius, perturbation } => {
            let min = (0..probes)
                .map(|j| radius + perturbation.eval(2.0 * PI * j as f64 / probes as f64))
                .fold(f64::INFINITY, f64::min);
            if min <= 0.0 {
                return Err(Error::DegenerateCurve(format!(
                    "polar radius reaches {min} <= 0"
                )));
            }
        }
        _ => {}
    }

    let mut curve = BoundaryCurve {
        params: Vec::with_capacity(n),
        points: Vec::with_capacity(n),
        speed: Vec::with_capacity(n),
        normals: Vec::with_capacity(n),
        curvature: Vec::with_capacity(n),
        closed: true,
    };
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        let (x, xp, xpp) = spec.eval3(t);
        let speed = xp[0].hypot(xp[1]);
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::DegenerateCurve(format!("zero tangent at t = {t}")));
        }
        let normal = [xp[1] / speed, -xp[0] / speed];
        let kappa = (xp[0] * xpp[1] - xp[1] * xpp[0]) / speed.powi(3);
        curve.params.push(t);
        curve.points.push(x);
        curve.speed.push(speed);
        curve.normals.push(normal);
        curve.curvature.push(kappa);
    }
    if curve_area(&curve) <= 0.0 {
        return Err(Error::DegenerateCurve("curve is not positively oriented".into()));
    }
    check_simple(&curve)?;
    Ok(curve)
}

/// Nodes that are far apart along the curve but close in the plane mean
/// the curve self-intersects or is under-resolved.
fn check_simple(curve: &BoundaryCurve) -> Result<()> {
    let n = curve.len();
    let h: Vec<f64> = (0..n).map(|k| curve.weight(k)).collect();
    let cell = 0.5 * h.iter().cloned().fold(0.0, f64::max);
    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, &p) in curve.points.iter().enumerate() {
        grid.entry(key(p)).or_default().push(k);
    }
    for (i, &p) in curve.points.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else { continue };
                for &j in bucket {
                    let sep = (i as isize - j as isize).unsigned_abs();
                    let cyclic = sep.min(n - sep);
                    if cyclic < 2 {
                        continue;
                    }
                    let q = curve.points[j];
                    let d = (p[0] - q[0]).hypot(p[1] - q[1]);
                    if d < 0.5 * h[i].min(h[j]) {
                        return Err(Error::DegenerateCurve(format!(
                            "nodes {i} and {j} are {d:e} apart"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Enclosed area by Green's theorem, 1/2 oint (x nu_1 + y nu_2) dS.
pub fn curve_area(curve: &BoundaryCurve) -> f64 {
    (0..curve.len())
        .map(|k| {
            let [x, y] = curve.points[k];
            let [n1, n2] = curve.normals[k];
            0.5 * (x * n1 + y * n2) * curve.weight(k)
        })
        .sum()
}

/// Minimum distance between the node sets of two curves.
pub fn separation(a: &BoundaryCurve, b: &BoundaryCurve) -> f64 {
    a.points.iter().map(|&p| b.distance_to(p)).fold(f64::INFINITY, f64::min)
}
