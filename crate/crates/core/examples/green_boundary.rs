//! Boundary value of the resolvent on (-2, 2) and its approach from E + i eps.

use jacobi_scatter::algebra::{c64, CMatrix, Side};
use jacobi_scatter::potential::Potential;
use jacobi_scatter::resolvent::{green_boundary, green_kernel};

fn main() -> jacobi_scatter::Result<()> {
    let v = Potential::new(2, vec![(0, CMatrix::scalar(2, c64(1.0, 0.0))), (1, CMatrix::identity(2).scale(c64(-0.5, 0.0)))])?;
    let e = 0.7;
    let b = green_boundary(&v, e, Side::Plus, 1, -2)?;
    println!("boundary value R_{{1,-2}}(0.7 + i0), entry 00: {:.10}", b[(0, 0)]);
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let g = green_kernel(&v, c64(e, eps), 1, -2)?;
        println!("eps = {eps:.0e}: ||R(E + i eps) - R(E + i0)|| = {:.3e}", (&g - &b).norm());
    }
    let m = green_boundary(&v, e, Side::Minus, -2, 1)?;
    println!("symmetry defect ||R_+(s,r) - R_-(r,s)*|| = {:.1e}", (&b - &m.adjoint()).norm());
    Ok(())
}
