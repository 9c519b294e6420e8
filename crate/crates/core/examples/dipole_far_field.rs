//! The far field of a core-shell inclusion recovers its polarization
//! tensor from the first Fourier mode.

use inclusion_neutrality::fields::{dipole_fit, FieldSolution};
use inclusion_neutrality::geometry::{build_curve, CurveSpec};
use inclusion_neutrality::polarization::{solve_coreshell, ConductivityProfile};

fn main() -> inclusion_neutrality::Result<()> {
    let core = build_curve(&CurveSpec::ellipse(1.0, 0.6), 256)?;
    let shell = build_curve(&CurveSpec::ellipse(1.6, 1.2), 256)?;
    let profile = ConductivityProfile::new(8.0, 0.5, 1.0)?;
    let sol = solve_coreshell(&core, &shell, &profile)?;
    let fields = [
        FieldSolution::from_coreshell(&core, &shell, &sol, [1.0, 0.0]),
        FieldSolution::from_coreshell(&core, &shell, &sol, [0.0, 1.0]),
    ];
    let r = 10.0 * fields[0].circumradius();
    let fit = dipole_fit(&fields, r, 64)?;
    println!("tensor   {:?}", sol.tensor.matrix);
    println!("far field {fit:?} (R = {r})");
    Ok(())
}
