//! Concentric disks with the neutral matrix conductivity leave a uniform
//! field undisturbed.

use inclusion_neutrality::fields::{max_perturbation, FieldSolution};
use inclusion_neutrality::geometry::{build_curve, curve_area, CurveSpec};
use inclusion_neutrality::neutrality::{neutral_matrix_conductivity, neutral_volume_fraction};
use inclusion_neutrality::polarization::{solve_coreshell, ConductivityProfile};

fn main() -> inclusion_neutrality::Result<()> {
    let (sigma_c, sigma_s, r_i, r_e) = (5.0, 2.0, 1.0, 2.0);
    let f = (r_i / r_e) * (r_i / r_e);
    let sigma_m = neutral_matrix_conductivity(sigma_c, sigma_s, f, 2)?;
    println!("sigma_m = {sigma_m:.15} (f = {f})");
    println!("inverse: f = {:.15}", neutral_volume_fraction(sigma_c, sigma_s, sigma_m, 2)?);

    let core = build_curve(&CurveSpec::circle(r_i), 256)?;
    let shell = build_curve(&CurveSpec::circle(r_e), 256)?;
    let profile = ConductivityProfile::new(sigma_c, sigma_s, sigma_m)?;
    let sol = solve_coreshell(&core, &shell, &profile)?;
    println!("|M| / |Omega| = {:.3e}", sol.tensor.norm() / curve_area(&shell));
    let field = FieldSolution::from_coreshell(&core, &shell, &sol, [1.0, 0.0]);
    println!("max |u - x| at |x| = 3 r_e: {:.3e}", max_perturbation(&field, 3.0 * r_e, 128)?);

    let detuned = ConductivityProfile::new(sigma_c, sigma_s, 1.1 * sigma_m)?;
    let sol = solve_coreshell(&core, &shell, &detuned)?;
    let field = FieldSolution::from_coreshell(&core, &shell, &sol, [1.0, 0.0]);
    println!("detuned sigma_m: max |u - x| = {:.3e}", max_perturbation(&field, 3.0 * r_e, 128)?);
    Ok(())
}
