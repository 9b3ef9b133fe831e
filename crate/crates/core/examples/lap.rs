//! Holder diagnostic of the weighted boundary resolvent.

use jacobi_scatter::algebra::{c64, CMatrix, Side};
use jacobi_scatter::potential::Potential;
use jacobi_scatter::resolvent::holder_diagnostic;

fn main() -> jacobi_scatter::Result<()> {
    let mut energies = Vec::new();
    for j in 0..9 {
        energies.push(0.2 + 1e-4 * 10f64.powf(j as f64 / 2.0));
    }
    let free = holder_diagnostic(&Potential::zero(1), &energies, Side::Plus, 2.0, 1.0, 40)?;
    println!("V = 0: fitted exponent {:.3}, max ratio {:.4}", free.fitted_exponent.unwrap_or(f64::NAN), free.max_ratio);

    let v = Potential::new(1, vec![(0, CMatrix::scalar(1, c64(0.9, 0.0))), (2, CMatrix::scalar(1, c64(-0.6, 0.0)))])?;
    for points in [9, 17, 33] {
        let grid: Vec<f64> = (0..points).map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64).collect();
        let r = holder_diagnostic(&v, &grid, Side::Plus, 1.5, 0.5, 20)?;
        println!("{points:>2} energies: max ratio {:.5}", r.max_ratio);
    }
    Ok(())
}
