//! Newton search for a shell that cancels the polarization tensor of a
//! perturbed disk.

use inclusion_neutrality::geometry::TrigPoly;
use inclusion_neutrality::neutrality::{find_coating_perturbed_disk, NewtonOptions};

fn main() -> inclusion_neutrality::Result<()> {
    let options = NewtonOptions::default();
    let shapes = [
        ("h = 0", TrigPoly::zero()),
        ("h = 0.05 cos 3t", TrigPoly::cosine(3, 0.05)),
        ("h = 0.05 cos 2t + 0.03 cos 3t", TrigPoly::cosine(2, 0.05).add(&TrigPoly::cosine(3, 0.03))),
    ];
    for (name, h) in shapes {
        let s = find_coating_perturbed_disk(&h, 10.0, 0.5, 1.0, 1.0, &options)?;
        println!("{name}: {} iterations, residual {:.2e}, b = {:?}", s.iterations, s.residual, s.b);
        for step in &s.trace {
            println!("  step {} residual {:.3e} damping {}", step.iteration, step.residual, step.damping);
        }
    }
    Ok(())
}
