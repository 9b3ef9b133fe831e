//! Small dense complex matrices, matrix sequences on Z, the Zhukovsky map and
//! matrix Wiener series.

mod matrix;
mod seq;
mod wiener;
mod zhukovsky;

pub use matrix::CMatrix;
pub use seq::{pairwise_sum, pairwise_sum_matrices, MatrixSeq};
pub use wiener::{wiener_norm, wiener_product, WienerSeries};
pub use zhukovsky::{inverse_zhukovsky, zhukovsky, Branch, Side, SpectralPoint, BRANCH_TOL, CIRCLE_TOL};

pub use num_complex::Complex64;

/// Shorthand for a complex number.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
