//! Dense truncated operator H_N on [-N, N] with zero boundary conditions,
//! used as brute-force ground truth.

use std::sync::OnceLock;

use faer::complex_native::c64 as fc64;
use faer::prelude::*;
use faer::Side as FaerSide;

use crate::algebra::{CMatrix, Complex64};
use crate::error::{Error, Result};
use crate::potential::Potential;

pub(crate) fn to_faer(c: Complex64) -> fc64 {
    fc64::new(c.re, c.im)
}

pub(crate) fn from_faer(c: fc64) -> Complex64 {
    Complex64::new(c.re, c.im)
}

/// Largest singular value of a dense faer matrix.
pub fn max_singular_value(m: MatRef<'_, fc64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().first().copied().unwrap_or(0.0)
}

struct Eigen {
    values: Vec<f64>,
    vectors: Mat<fc64>,
}

/// H_N = H_0 + V restricted to [-N, N].
pub struct TruncatedOperator {
    n: i64,
    dim: usize,
    matrix: Mat<fc64>,
    eigen: OnceLock<std::result::Result<Eigen, String>>,
}

impl TruncatedOperator {
    pub fn new(v: &Potential, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!("oracle half-width must be >= 1, got {n}")));
        }
        let l = v.dim();
        let size = (2 * n + 1) as usize * l;
        let mut matrix = Mat::<fc64>::zeros(size, size);
        for site in -n..=n {
            let b = (site + n) as usize * l;
            if let Some(vn) = v.at(site) {
                for i in 0..l {
                    for j in 0..l {
                        matrix.write(b + i, b + j, to_faer(vn[(i, j)]));
                    }
                }
            }
            if site < n {
                for i in 0..l {
                    matrix.write(b + i, b + l + i, fc64::new(1.0, 0.0));
                    matrix.write(b + l + i, b + i, fc64::new(1.0, 0.0));
                }
            }
        }
        Ok(TruncatedOperator { n, dim: l, matrix, eigen: OnceLock::new() })
    }

    pub fn half_width(&self) -> i64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, fc64> {
        self.matrix.as_ref()
    }

    /// Row index of component i at a site.
    pub fn index(&self, site: i64, i: usize) -> usize {
        (site + self.n) as usize * self.dim + i
    }

    fn eigen(&self) -> Result<&Eigen> {
        self.eigen
            .get_or_init(|| {
                let evd = self.matrix.selfadjoint_eigendecomposition(FaerSide::Lower);
                let s = evd.s().column_vector();
                let values: Vec<f64> = (0..s.nrows()).map(|i| s.read(i).re).collect();
                if values.iter().any(|x| !x.is_finite()) {
                    return Err("non-finite eigenvalue".to_string());
                }
                Ok(Eigen { values, vectors: evd.u().to_owned() })
            })
            .as_ref()
            .map_err(|e| Error::Eigen(e.clone()))
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> Result<&[f64]> {
        Ok(&self.eigen()?.values)
    }

    /// Distance from a complex energy to the spectrum of H_N.
    pub fn spectral_distance(&self, e: Complex64) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .map(|&l| (Complex64::new(l, 0.0) - e).norm())
            .fold(f64::INFINITY, f64::min))
    }

    /// (H_N - E)^{-1} by LU with partial pivoting.
    pub fn resolvent(&self, e: Complex64) -> Result<OracleMatrix> {
        if self.spectral_distance(e)? < 1e-8 {
            return Err(Error::EigenvalueProximity(e));
        }
        let size = self.size();
        let shifted = Mat::<fc64>::from_fn(size, size, |i, j| {
            let h = self.matrix.read(i, j);
            if i == j {
                h - to_faer(e)
            } else {
                h
            }
        });
        let lu = shifted.partial_piv_lu();
        let x = lu.solve(Mat::<fc64>::identity(size, size));
        let res = &shifted * &x - Mat::<fc64>::identity(size, size);
        let residual = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .map(|(i, j)| from_faer(res.read(i, j)).norm())
            .fold(0.0, f64::max);
        if !residual.is_finite() {
            return Err(Error::EigenvalueProximity(e));
        }
        Ok(OracleMatrix { n: self.n, dim: self.dim, lo: -self.n, matrix: x, residual })
    }

    /// f(H_N) restricted to sites `[-w, w]`; eigenvalues where f is None are dropped.
    pub fn spectral_block(&self, w: i64, f: impl Fn(f64) -> Option<Complex64>) -> Result<OracleMatrix> {
        let w = w.min(self.n);
        let eig = self.eigen()?;
        let rows: Vec<usize> = (self.index(-w, 0)..=self.index(w, self.dim - 1)).collect();
        let k = eig.values.len();
        let weights: Vec<Option<Complex64>> = eig.values.iter().map(|&l| f(l)).collect();
        let q = Mat::<fc64>::from_fn(rows.len(), k, |i, j| eig.vectors.read(rows[i], j));
        let qw = Mat::<fc64>::from_fn(rows.len(), k, |i, j| match weights[j] {
            Some(c) => q.read(i, j) * to_faer(c),
            None => fc64::new(0.0, 0.0),
        });
        let m = &qw * q.adjoint();
        Ok(OracleMatrix { n: w, dim: self.dim, lo: -w, matrix: m, residual: 0.0 })
    }

    /// e^{-itH_N} times the projector onto eigenvalues in (-2, 2), on `[-w, w]`.
    pub fn propagator(&self, t: f64, w: i64) -> Result<OracleMatrix> {
        self.spectral_block(w, |l| (l > -2.0 && l < 2.0).then(|| Complex64::from_polar(1.0, -t * l)))
    }

    /// Spectral projector onto eigenvalues in (a, b), on `[-w, w]`.
    pub fn spectral_projector(&self, a: f64, b: f64, w: i64) -> Result<OracleMatrix> {
        self.spectral_block(w, |l| (l > a && l < b).then_some(Complex64::new(1.0, 0.0)))
    }

    /// Eigenvalues outside [-2 - 10/N, 2 + 10/N].
    pub fn isolated_eigenvalues(&self) -> Result<Vec<f64>> {
        let delta = 10.0 / self.n as f64;
        Ok(self
            .eigenvalues()?
            .iter()
            .copied()
            .filter(|l| l.abs() > 2.0 + delta)
            .collect())
    }
}

/// A dense block matrix indexed by sites of `[lo, lo + 2n]`.
pub struct OracleMatrix {
    n: i64,
    dim: usize,
    lo: i64,
    matrix: Mat<fc64>,
    /// max-entry residual of the defining linear system (zero when not applicable)
    pub residual: f64,
}

impl OracleMatrix {
    pub fn half_width(&self) -> i64 {
        self.n
    }

    pub fn block(&self, s: i64, r: i64) -> Result<CMatrix> {
        let hi = self.lo + 2 * self.n;
        for x in [s, r] {
            if x < self.lo || x > hi {
                return Err(Error::OutOfWindow(x));
            }
        }
        let (bs, br) = ((s - self.lo) as usize * self.dim, (r - self.lo) as usize * self.dim);
        Ok(CMatrix::from_fn(self.dim, |i, j| from_faer(self.matrix.read(bs + i, br + j))))
    }

    pub fn as_faer(&self) -> MatRef<'_, fc64> {
        self.matrix.as_ref()
    }
}

pub fn oracle_resolvent(v: &Potential, e: Complex64, n: i64) -> Result<OracleMatrix> {
    TruncatedOperator::new(v, n)?.resolvent(e)
}

/// Propagator on the full truncation window.
pub fn oracle_propagator(v: &Potential, t: f64, n: i64) -> Result<OracleMatrix> {
    TruncatedOperator::new(v, n)?.propagator(t, n)
}

/// Isolated eigenvalues of H_N with their distance to [-2, 2].
#[derive(Clone, Debug, serde::Serialize)]
pub struct PointSpectrum {
    pub n: i64,
    pub eigenvalues: Vec<(f64, f64)>,
    /// same count at 2N and every eigenvalue reproduced to 1e-6
    pub stable: bool,
}

pub fn oracle_point_spectrum(v: &Potential, n: i64) -> Result<PointSpectrum> {
    let a = TruncatedOperator::new(v, n)?.isolated_eigenvalues()?;
    let b = TruncatedOperator::new(v, 2 * n)?.isolated_eigenvalues()?;
    let stable = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-6);
    Ok(PointSpectrum {
        n,
        eigenvalues: a.into_iter().map(|l| (l, l.abs() - 2.0)).collect(),
        stable,
    })
}
