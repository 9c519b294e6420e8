//! Single-layer potentials and Nystrom matrices on smooth closed curves.
//!
//! Every matrix uses the periodic trapezoidal rule: column j carries the
//! arclength weight of source node j. Rows are assembled in parallel but
//! each row is summed sequentially, so results do not depend on scheduling.

use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geometry::{separation, BoundaryCurve};

/// Minimum source-target separation for cross operators, in units of
/// the largest node spacing.
pub const CROSS_SEPARATION_FACTOR: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// K*[phi](x) = int <x - y, nu(x)> / (2 pi |x - y|^2) phi(y) dS(y) on one curve.
    NeumannPoincare,
    /// Normal derivative at the target of the single layer on the source.
    NormalDerivativeCross,
    /// Single layer on the source evaluated at target nodes.
    SingleLayerCross,
}

/// Dense matrix of a boundary operator, rows indexed by target nodes.
#[derive(Clone, Debug)]
pub struct BoundaryOperatorMatrix {
    pub kind: OperatorKind,
    pub matrix: DMatrix<f64>,
}

impl BoundaryOperatorMatrix {
    pub fn apply(&self, density: &[f64]) -> Vec<f64> {
        let v = &self.matrix * nalgebra::DVector::from_column_slice(density);
        v.as_slice().to_vec()
    }
}

/// Nodal values of a density on a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerDensity {
    pub values: Vec<f64>,
}

impl LayerDensity {
    pub fn new(curve: &BoundaryCurve, values: Vec<f64>) -> Result<Self> {
        if values.len() != curve.len() {
            return Err(invalid(format!(
                "density has {} values for {} nodes",
                values.len(),
                curve.len()
            )));
        }
        Ok(Self { values })
    }

    pub fn constant(curve: &BoundaryCurve, c: f64) -> Self {
        Self { values: vec![c; curve.len()] }
    }

    /// int phi dS
    pub fn integral(&self, curve: &BoundaryCurve) -> f64 {
        self.values.iter().enumerate().map(|(k, v)| v * curve.weight(k)).sum()
    }

    /// |int phi dS| / (perimeter * max |phi|); zero for mean-zero densities.
    pub fn relative_mean(&self, curve: &BoundaryCurve) -> f64 {
        let max = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max == 0.0 {
            return 0.0;
        }
        self.integral(curve).abs() / (curve.perimeter() * max)
    }
}

fn assemble(rows: usize, cols: usize, entry: impl Fn(usize, usize) -> f64 + Sync) -> DMatrix<f64> {
    let data: Vec<f64> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|i| {
            let entry = &entry;
            (0..cols).map(move |j| entry(i, j))
        })
        .collect();
    DMatrix::from_row_slice(rows, cols, &data)
}

/// Nystrom matrix of K* with diagonal limit kappa / (4 pi).
pub fn np_matrix(curve: &BoundaryCurve) -> BoundaryOperatorMatrix {
    let n = curve.len();
    let matrix = assemble(n, n, |k, j| {
        let w = curve.weight(j);
        if k == j {
            return curve.curvature[k] / (4.0 * PI) * w;
        }
        let [x1, x2] = curve.points[k];
        let [y1, y2] = curve.points[j];
        let (d1, d2) = (x1 - y1, x2 - y2);
        let nu = curve.normals[k];
        (d1 * nu[0] + d2 * nu[1]) / (2.0 * PI * (d1 * d1 + d2 * d2)) * w
    });
    BoundaryOperatorMatrix { kind: OperatorKind::NeumannPoincare, matrix }
}

fn check_separation(source: &BoundaryCurve, target: &BoundaryCurve) -> Result<()> {
    let required = CROSS_SEPARATION_FACTOR * source.max_spacing().max(target.max_spacing());
    let sep = separation(source, target);
    if sep < required {
        return Err(Error::CurvesTooClose { separation: sep, required });
    }
    Ok(())
}

/// Matrix of the map phi on `source` to the normal derivative of S_source[phi] at `target` nodes.
pub fn dns_cross_matrix(source: &BoundaryCurve, target: &BoundaryCurve) -> Result<BoundaryOperatorMatrix> {
    check_separation(source, target)?;
    let matrix = assemble(target.len(), source.len(), |k, j| {
        let [x1, x2] = target.points[k];
        let [y1, y2] = source.points[j];
        let (d1, d2) = (x1 - y1, x2 - y2);
        let nu = target.normals[k];
        (d1 * nu[0] + d2 * nu[1]) / (2.0 * PI * (d1 * d1 + d2 * d2)) * source.weight(j)
    });
    Ok(BoundaryOperatorMatrix { kind: OperatorKind::NormalDerivativeCross, matrix })
}

/// Matrix of S_source evaluated at `target` nodes.
pub fn s_cross_matrix(source: &BoundaryCurve, target: &BoundaryCurve) -> Result<BoundaryOperatorMatrix> {
    check_separation(source, target)?;
    let matrix = assemble(target.len(), source.len(), |k, j| {
        let [x1, x2] = target.points[k];
        let [y1, y2] = source.points[j];
        (x1 - y1).hypot(x2 - y2).ln() / (2.0 * PI) * source.weight(j)
    });
    Ok(BoundaryOperatorMatrix { kind: OperatorKind::SingleLayerCross, matrix })
}

/// Smallest admissible distance of an evaluation point from `curve`.
pub fn evaluation_clearance(curve: &BoundaryCurve) -> f64 {
    2.0 * PI * curve.perimeter() / curve.len() as f64
}

fn check_point(curve: &BoundaryCurve, p: [f64; 2]) -> Result<()> {
    let required = evaluation_clearance(curve);
    let distance = curve.distance_to(p);
    if !(distance > required) {
        return Err(Error::PointTooClose { x: p[0], y: p[1], distance, required });
    }
    Ok(())
}

/// S[phi](x) = (1/2 pi) int log|x - y| phi(y) dS(y) at each point.
pub fn single_layer_eval(curve: &BoundaryCurve, density: &LayerDensity, points: &[[f64; 2]]) -> Result<Vec<f64>> {
    if density.values.len() != curve.len() {
        return Err(invalid("density length does not match the curve"));
    }
    for &p in points {
        check_point(curve, p)?;
    }
    Ok(points.par_iter().map(|&p| single_layer_at(curve, &density.values, p)).collect())
}

pub(crate) fn single_layer_at(curve: &BoundaryCurve, phi: &[f64], p: [f64; 2]) -> f64 {
    let mut acc = 0.0;
    for (j, v) in phi.iter().enumerate() {
        let [y1, y2] = curve.points[j];
        acc += (p[0] - y1).hypot(p[1] - y2).ln() * v * curve.weight(j);
    }
    acc / (2.0 * PI)
}

/// Gradient of S[phi] at each point.
pub fn single_layer_gradient(curve: &BoundaryCurve, density: &LayerDensity, points: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
    for &p in points {
        check_point(curve, p)?;
    }
    Ok(points
        .par_iter()
        .map(|&p| {
            let (mut g1, mut g2) = (0.0, 0.0);
            for (j, v) in density.values.iter().enumerate() {
                let [y1, y2] = curve.points[j];
                let (d1, d2) = (p[0] - y1, p[1] - y2);
                let s = v * curve.weight(j) / (d1 * d1 + d2 * d2);
                g1 += d1 * s;
                g2 += d2 * s;
            }
            [g1 / (2.0 * PI), g2 / (2.0 * PI)]
        })
        .collect())
}
