//! Weakly neutral coatings of perfect conductors with b_D = 0: the
//! coated perturbation decays faster than the uncoated one.

use inclusion_neutrality::fields::{decay_exponent, max_perturbation, FieldSolution};
use inclusion_neutrality::geometry::{curve_area, ConformalMap};
use inclusion_neutrality::neutrality::construct_coating_bd0;
use inclusion_neutrality::polarization::{solve_coreshell, solve_simple};
use num_complex::Complex64;

fn main() -> inclusion_neutrality::Result<()> {
    for (n, sigma_s) in [(2, 0.5), (3, 0.3)] {
        let map = ConformalMap::monomial(n, Complex64::new(0.25, 0.0))?;
        let coating = construct_coating_bd0(&map, sigma_s)?;
        let (core, shell) = coating.curves(512)?;
        let sol = solve_coreshell(&core, &shell, &coating.profile())?;
        let coated = FieldSolution::from_coreshell(&core, &shell, &sol, [1.0, 0.0]);
        let bare = FieldSolution::from_simple(&core, &solve_simple(&core, f64::INFINITY)?, [1.0, 0.0]);

        let rho = coated.circumradius();
        let dc = decay_exponent(&coated, (4.0 * rho, 8.0 * rho), 128)?;
        let du = decay_exponent(&bare, (4.0 * rho, 8.0 * rho), 128)?;
        let ratio = max_perturbation(&coated, 2.0 * rho, 256)? / max_perturbation(&bare, 2.0 * rho, 256)?;
        println!("Phi = zeta + 1/(4 zeta^{n}), sigma_s = {sigma_s}: r = {:.6}", coating.radius);
        println!("  |M| / |Omega| = {:.2e}", sol.tensor.norm() / curve_area(&shell));
        println!("  decay exponent coated {:.4}, uncoated {:.4}", dc.exponent, du.exponent);
        println!("  perturbation ratio at twice the circumradius {ratio:.4}");
    }
    Ok(())
}
