#![allow(dead_code)]

use jacobi_scatter::algebra::{c64, CMatrix, Complex64};
use jacobi_scatter::potential::Potential;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random Hermitian L x L entries in [-1, 1] on every site of [-half, half].
pub fn random_potential(seed: u64, half: i64, l: usize) -> Potential {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (-half..=half)
        .map(|n| {
            let diag: Vec<f64> = (0..l).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut vals = vec![vec![c64(0.0, 0.0); l]; l];
            for i in 0..l {
                vals[i][i] = c64(diag[i], 0.0);
                for j in (i + 1)..l {
                    let z = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    vals[i][j] = z;
                    vals[j][i] = z.conj();
                }
            }
            (n, CMatrix::from_fn(l, |i, j| vals[i][j]))
        })
        .collect();
    Potential::new(l, entries).expect("hermitian by construction")
}

/// `count` points on the unit circle, half on each open half circle, all
/// with |arg z| and |arg z - pi| at least `arc`.
pub fn circle_points(count: usize, arc: f64) -> Vec<Complex64> {
    let pi = std::f64::consts::PI;
    let half = count / 2;
    let width = pi - 2.0 * arc;
    (0..count)
        .map(|j| {
            let (base, k) = if j < half { (0.0, j) } else { (pi, j - half) };
            let per = if j < half { half } else { count - half };
            base + arc + width * (k as f64 + 0.5) / per as f64
        })
        .map(|t| Complex64::from_polar(1.0, t))
        .collect()
}

/// ||a - b|| <= tol (1 + ||b||)
pub fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}
