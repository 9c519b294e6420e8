//! Trace bounds: ellipses sit on the lower bound, other shapes do not.

use inclusion_neutrality::geometry::{build_curve, curve_area, ConformalMap, CurveSpec};
use inclusion_neutrality::polarization::{hs_check, pt_simple};
use num_complex::Complex64;

fn main() -> inclusion_neutrality::Result<()> {
    let kite = ConformalMap::monomial(2, Complex64::new(0.2, 0.0))?;
    let shapes = [
        ("ellipse 2:1", CurveSpec::ellipse(2.0, 1.0)),
        ("ellipse 5:1", CurveSpec::ellipse(5.0, 1.0)),
        ("zeta + 0.2/zeta^2", CurveSpec::conformal(kite)),
    ];
    for (name, spec) in shapes {
        let c = build_curve(&spec, 512)?;
        for k in [0.2, 3.0, 10.0] {
            let m = pt_simple(&c, k)?;
            let r = hs_check(&m, k, curve_area(&c))?;
            println!(
                "{name:<18} k={k:<4} upper slack {:.3e}  lower slack {:.3e}  attained {}",
                r.upper_slack, r.lower_slack, r.attains_lower
            );
        }
    }
    Ok(())
}
