//! Samples the potential around a coated inclusion on a grid and writes
//! it as CSV.

use inclusion_neutrality::fields::{grid_sample, FieldSolution};
use inclusion_neutrality::geometry::ConformalMap;
use inclusion_neutrality::neutrality::construct_coating_bd0;
use inclusion_neutrality::polarization::solve_coreshell;
use num_complex::Complex64;
use std::fs::File;
use std::io::BufWriter;

fn main() -> inclusion_neutrality::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "coated_field.csv".into());
    let map = ConformalMap::monomial(2, Complex64::new(0.25, 0.0))?;
    let coating = construct_coating_bd0(&map, 0.5)?;
    let (core, shell) = coating.curves(256)?;
    let sol = solve_coreshell(&core, &shell, &coating.profile())?;
    let field = FieldSolution::from_coreshell(&core, &shell, &sol, [1.0, 0.0]);
    let grid = grid_sample(&field, [-4.0, 4.0, -4.0, 4.0], (161, 161), false)?;
    grid.write_csv(BufWriter::new(File::create(&path)?))?;
    println!("wrote {} cells to {path}; max exterior |u - x| = {:.3e}", grid.cells.len(), grid.max_exterior_perturbation());
    Ok(())
}
