//! Shell problem for confocal ellipsoids and concentric balls, and the
//! matrix conductivity that makes a confocal pair neutral.

use inclusion_neutrality::ellipsoid_potentials::{alpha_coefficients, odp_residual, odp_w, EllipsoidPair, OdpGeometry};
use inclusion_neutrality::neutrality::confocal_matrix_conductivity;

fn main() -> inclusion_neutrality::Result<()> {
    let pair = EllipsoidPair::new([4.0, 2.0, 1.0], 2.0)?;
    let sol = odp_w(OdpGeometry::Confocal(pair))?;
    let res = odp_residual(&sol, &pair, 200, 1);
    println!("confocal c^2 = (4, 2, 1), rho0 = 2: A = {:?}", sol.a);
    println!(
        "  residuals: laplacian {:.2e}, outer gradient {:.2e}, inner affine {:.2e}",
        res.laplacian_residual, res.outer_grad_max, res.inner_affine_residual
    );
    let alpha = alpha_coefficients(pair.rho0, &pair.c2)?;
    let f = pair.volume_fraction();
    println!("  alpha = {alpha:?}, 2 sum alpha = {:.15}, 1 - 1/f = {:.15}", 2.0 * alpha.iter().sum::<f64>(), 1.0 - 1.0 / f);

    let balls = odp_w(OdpGeometry::Balls { r_i: 1.0, r_e: 2.0 })?;
    println!("balls r_i = 1, r_e = 2: A = {:?} (expected {})", balls.a, (1.0 - 8.0) / 3.0);

    let c = confocal_matrix_conductivity(pair.c2, pair.rho0, 3.0, 2.0)?;
    println!("neutral sigma_m for sigma_c = 3, sigma_s = 2: {:?}", c.sigma_m);
    println!("  trace condition residual {:?}", c.trace_residual);
    Ok(())
}
