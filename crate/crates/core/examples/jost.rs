//! Jost solution of a two-site barrier, by the Volterra recursion and by
//! the transmutation series.

use jacobi_scatter::algebra::{c64, CMatrix, Complex64, SpectralPoint};
use jacobi_scatter::jost::{jost_series, jost_volterra, transmutation_coeffs, Direction};
use jacobi_scatter::potential::Potential;

fn main() -> jacobi_scatter::Result<()> {
    let v = Potential::new(1, vec![(0, CMatrix::scalar(1, c64(0.8, 0.0))), (1, CMatrix::scalar(1, c64(-0.4, 0.0)))])?;
    let point = SpectralPoint::from_z(Complex64::from_polar(1.0, 1.1))?;
    let window = (-6, 6);
    let vol = jost_volterra(&v, &point, Direction::Plus, window, 0.0)?;
    let table = transmutation_coeffs(&v, Direction::Plus, window);
    println!("{:>3} {:>24} {:>24}", "n", "volterra", "series");
    for n in window.0..=window.1 {
        let a = vol.at(n)?[(0, 0)];
        let b = jost_series(&table, &point, n)?[(0, 0)];
        println!("{n:>3} {:>11.8} {:>+11.8}i {:>11.8} {:>+11.8}i", a.re, a.im, b.re, b.im);
    }
    Ok(())
}
