//! Smooth closed planar curves and their equispaced discretizations.

mod conformal;
mod curve;

pub use conformal::ConformalMap;
pub use curve::{build_curve, curve_area, separation, BoundaryCurve, CurveSpec, TrigPoly};
