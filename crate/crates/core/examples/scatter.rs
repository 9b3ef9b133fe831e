//! Transmission and reflection on the unit circle, the unitarity defect and
//! the genericity verdict.

use jacobi_scatter::algebra::{c64, CMatrix, Complex64, SpectralPoint};
use jacobi_scatter::potential::Potential;
use jacobi_scatter::scattering::{is_generic, scattering_matrices};

fn main() -> jacobi_scatter::Result<()> {
    let v = Potential::new(
        2,
        vec![
            (0, CMatrix::from_fn(2, |i, j| if i == j { c64(0.5, 0.0) } else if i < j { c64(0.2, 0.3) } else { c64(0.2, -0.3) })),
            (2, CMatrix::scalar(2, c64(-0.7, 0.0))),
        ],
    )?;
    println!("{:>6} {:>12} {:>12} {:>12}", "k", "|T+|", "|R+|", "unitarity");
    for j in 1..12 {
        let k = std::f64::consts::PI * j as f64 / 12.0;
        let d = scattering_matrices(&v, &SpectralPoint::from_z(Complex64::from_polar(1.0, k))?)?;
        let mut g = d.t_plus.adjoint() * &d.t_plus;
        g.add_product(&d.r_plus.adjoint(), &d.r_plus);
        println!("{k:>6.3} {:>12.6} {:>12.6} {:>12.2e}", d.t_plus.norm(), d.r_plus.norm(), (&g - &CMatrix::identity(2)).norm());
    }
    let g = is_generic(&v, 512);
    println!("generic: {} (min |det W| = {:.3e}, edge resonance: {})", g.generic, g.min_abs_det, g.edge_resonance);
    Ok(())
}
