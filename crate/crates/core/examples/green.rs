//! Resolvent kernel off the spectrum against the closed form for V = 0 and
//! the truncated-lattice oracle for a random-looking potential.

use jacobi_scatter::algebra::{c64, inverse_zhukovsky, CMatrix, Side};
use jacobi_scatter::oracle::oracle_resolvent;
use jacobi_scatter::potential::Potential;
use jacobi_scatter::resolvent::green_kernel;

fn main() -> jacobi_scatter::Result<()> {
    let e = c64(3.0, 0.0);
    let free = green_kernel(&Potential::zero(1), e, 0, 0)?[(0, 0)];
    let z = inverse_zhukovsky(e, Side::Plus)?;
    println!("free R_00(3) = {:.12} (closed form {:.12})", free.re, (1.0 / (z - z.inv())).re);

    let v = Potential::new(1, (-2..=2).map(|n| (n, CMatrix::scalar(1, c64(0.3 * n as f64, 0.0)))).collect())?;
    let e = c64(0.5, 0.4);
    let o = oracle_resolvent(&v, e, 200)?;
    for (s, r) in [(0, 0), (-3, 2), (5, -5)] {
        let g = green_kernel(&v, e, s, r)?[(0, 0)];
        let b = o.block(s, r)?[(0, 0)];
        println!("R_{{{s},{r}}}: kernel {g:.10}, oracle {b:.10}, diff {:.1e}", (g - b).norm());
    }
    Ok(())
}
