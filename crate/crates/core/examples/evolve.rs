//! Kernel of exp(-itH) P_ac by both quadratures, with the free Bessel value.

use jacobi_scatter::algebra::{c64, CMatrix};
use jacobi_scatter::bessel::bessel_j;
use jacobi_scatter::evolution::{Evolution, Method};
use jacobi_scatter::potential::Potential;

fn main() -> jacobi_scatter::Result<()> {
    let free = Evolution::new(&Potential::zero(1));
    let t = 5.0;
    for n in [0i64, 3, 10] {
        let k = free.kernel(t, 0, n, Method::FourierBessel)?[(0, 0)];
        let want = c64(0.0, -1.0).powi(n as i32) * bessel_j(n, 2.0 * t);
        println!("free K_{{0,{n}}}({t}) = {k:.12}, Bessel {want:.12}");
    }
    let v = Potential::new(1, vec![(0, CMatrix::scalar(1, c64(-1.5, 0.0))), (1, CMatrix::scalar(1, c64(0.5, 0.0)))])?;
    let ev = Evolution::new(&v);
    println!("genericity: {}", ev.genericity().generic);
    for t in [0.5, 2.0, 8.0] {
        let (a, b, d) = ev.kernel_checked(t, 0, 1, 1e-9)?;
        println!("t = {t}: kgrid {:.10}, fourier-bessel {:.10}, diff {d:.1e}", a[(0, 0)], b[(0, 0)]);
    }
    Ok(())
}
