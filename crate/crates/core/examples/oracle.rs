//! Cross-checks against the truncated lattice: point spectrum, propagator
//! and spectral projector.

use jacobi_scatter::algebra::{c64, CMatrix};
use jacobi_scatter::evolution::{spectral_measure, Evolution, Method};
use jacobi_scatter::oracle::{oracle_point_spectrum, oracle_propagator, TruncatedOperator};
use jacobi_scatter::potential::Potential;

fn main() -> jacobi_scatter::Result<()> {
    let v = Potential::new(1, vec![(0, CMatrix::scalar(1, c64(-3.0, 0.0))), (1, CMatrix::scalar(1, c64(0.5, 0.0)))])?;
    let ps = oracle_point_spectrum(&v, 100)?;
    println!("isolated eigenvalues {:?} (stable: {})", ps.eigenvalues.iter().map(|e| e.0).collect::<Vec<_>>(), ps.stable);

    let ev = Evolution::new(&v);
    let o = oracle_propagator(&v, 4.0, 200)?;
    for (s, r) in [(0, 0), (2, -1), (-5, 6)] {
        let k = ev.kernel(4.0, s, r, Method::FourierBessel)?;
        println!("K_{{{s},{r}}}(4): |kernel - oracle| = {:.1e}", (&k - &o.block(s, r)?).norm());
    }
    let p = TruncatedOperator::new(&v, 400)?.spectral_projector(-1.0, 1.0, 5)?;
    let m = spectral_measure(&v, -1.0, 1.0, 0, 0)?;
    println!("E(-1,1)_00: measure {:.6}, truncated projector {:.6}", m[(0, 0)].re, p.block(0, 0)?[(0, 0)].re);
    Ok(())
}
