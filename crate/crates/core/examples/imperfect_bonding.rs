//! Bonding parameters that make a perfect conductor weakly neutral,
//! checked with the spectral exterior solver.

use inclusion_neutrality::fields::{calibrate_bonding_mean, solve_imperfect_exterior};
use inclusion_neutrality::geometry::ConformalMap;
use inclusion_neutrality::neutrality::{bd_bound, beta_disk, beta_weakly_neutral, solve_lc_disk, BondingParameter};
use num_complex::Complex64;

fn main() -> inclusion_neutrality::Result<()> {
    let beta = beta_disk(1.0, f64::INFINITY, 1.0)?;
    let disk = solve_lc_disk(1.0, f64::INFINITY, 1.0, beta)?;
    println!("unit disk: neutral beta {beta}, exterior dipole coefficient {:.1e}", disk.d);

    println!("|b_D| must stay below {:.6}", bd_bound());
    for b in [0.0, 0.05, 0.1, 0.25] {
        let map = ConformalMap::monomial(1, Complex64::new(b, 0.0))?;
        let bp = beta_weakly_neutral(&map, 512)?;
        for alpha in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let s = solve_imperfect_exterior(&map, &bp, alpha, 64)?;
            println!(
                "b_D = {b:<5} alpha = {alpha:<6} min beta {:.4}  |alpha_1| = {:.3e}  lambda = {:.3e}",
                bp.min,
                s.alpha1.norm(),
                s.lambda_core
            );
        }
    }

    let map = ConformalMap::monomial(1, Complex64::new(0.1, 0.0))?;
    let s = solve_imperfect_exterior(&map, &BondingParameter::constant(&map, 1.0, 512)?, Complex64::new(1.0, 0.0), 64)?;
    println!("beta = 1 on b_D = 0.1: |alpha_1| = {:.3e}", s.alpha1.norm());

    // closed form with its constant term re-fitted against the solver
    for b in [0.1, 0.25] {
        let map = ConformalMap::monomial(1, Complex64::new(b, 0.0))?;
        let bp = calibrate_bonding_mean(&map, 512, 64, 1e-14)?;
        let s = solve_imperfect_exterior(&map, &bp, Complex64::new(0.0, 1.0), 64)?;
        println!("b_D = {b}: calibrated {:?}, |alpha_1| for alpha = i {:.3e}", bp.profile, s.alpha1.norm());
    }

    let too_big = ConformalMap::monomial(1, Complex64::new(0.3, 0.0))?;
    println!("b_D = 0.3: {}", beta_weakly_neutral(&too_big, 512).unwrap_err());
    Ok(())
}
