//! Quadrature identities of ellipses, ellipsoids and Neumann ovals, and
//! the Newtonian-potential form of the confocal shell problem.

use inclusion_neutrality::ellipsoid_potentials::EllipsoidPair;
use inclusion_neutrality::geometry::CurveSpec;
use inclusion_neutrality::quadrature_domains::{
    check_newtonian_formulation, check_newtonian_pair, focal_ellipse_identity, mean_value_identity,
    neumann_oval_identity, Region,
};

fn main() -> inclusion_neutrality::Result<()> {
    let r2 = focal_ellipse_identity(&[2.0, 1.0], 6, 256)?;
    let r3 = focal_ellipse_identity(&[3.0, 2.0, 1.0], 6, 256)?;
    println!("focal identity: ellipse residual {:.2e}, ellipsoid residual {:.2e}", r2.residual, r3.residual);
    println!("  mass: {:.12} and {:.12}", r2.tests[0].rhs, r3.tests[0].rhs);

    let oval = neumann_oval_identity(1.0, 0.5, 6, 512)?;
    println!("Neumann oval alpha = 1, eps = 0.5: p = {:.15}, residual {:.2e}", oval.derived[0].1, oval.residual);

    let confocal = mean_value_identity(
        &Region::curve(CurveSpec::ellipse(2.0, 1.0)),
        &Region::curve(CurveSpec::ellipse(7f64.sqrt(), 2.0)),
        6,
        256,
    )?;
    let eccentric = mean_value_identity(
        &Region::curve(CurveSpec::Circle { radius: 0.5, center: [0.4, 0.0] }),
        &Region::curve(CurveSpec::circle(2.0)),
        6,
        256,
    )?;
    println!("mean value: confocal ellipses {:.2e}, eccentric disks {:.2e}", confocal.residual, eccentric.residual);

    let pair = EllipsoidPair::new([4.0, 2.0, 1.0], 2.0)?;
    let c = check_newtonian_formulation(&pair, 100, 100, 3)?;
    println!(
        "Newtonian check: exterior {:.2e}, fit {:.2e}, linear {:.2e}",
        c.outside_max, c.fit_residual, c.linear_term_norm
    );
    println!("  fitted alpha {:?}\n  expected     {:?}", c.fitted_alpha, c.expected_alpha.unwrap());
    let off = check_newtonian_pair(pair.c2, [6.5, 4.0, 3.0], 100, 100, 3)?;
    println!("non-confocal shell: exterior {:.2e}", off.outside_max);
    Ok(())
}
