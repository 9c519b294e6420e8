//! Polarization tensors of a disk and an ellipse against closed forms.

use inclusion_neutrality::geometry::{build_curve, CurveSpec};
use inclusion_neutrality::polarization::pt_simple;
use std::f64::consts::PI;

fn main() -> inclusion_neutrality::Result<()> {
    let disk = build_curve(&CurveSpec::circle(1.0), 256)?;
    for k in [0.5, 2.0, 10.0, f64::INFINITY] {
        let m = pt_simple(&disk, k)?;
        // 2 pi (k-1)/(k+1) |D| / pi for a disk
        let exact = if k.is_infinite() { 2.0 * PI } else { 2.0 * PI * (k - 1.0) / (k + 1.0) };
        println!("disk k={k:<4} m11={:.12} exact={:.12}", m.matrix[0][0], exact);
    }

    let (a, b, k) = (2.0, 1.0, 3.0);
    let ellipse = build_curve(&CurveSpec::ellipse(a, b), 256)?;
    let m = pt_simple(&ellipse, k)?;
    let area = PI * a * b;
    let m11 = (k - 1.0) * area * (a + b) / (a + k * b);
    let m22 = (k - 1.0) * area * (a + b) / (b + k * a);
    println!("ellipse 2:1 k=3 m11={:.12} ({m11:.12}) m22={:.12} ({m22:.12})", m.matrix[0][0], m.matrix[1][1]);
    Ok(())
}
