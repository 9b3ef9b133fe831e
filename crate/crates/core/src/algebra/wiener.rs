use num_complex::Complex64;

use super::seq::pairwise_sum;
use super::CMatrix;
use crate::error::{Error, Result};

/// Truncated matrix Fourier series `sum_m a_m z^m` on the unit circle.
///
/// Evaluation at angle k means z = e^{ik}. `tail_bound` bounds the
/// Wiener norm of everything dropped by truncation.
#[derive(Clone, Debug)]
pub struct WienerSeries {
    m_min: i64,
    dim: usize,
    coeffs: Vec<CMatrix>,
    tail_bound: f64,
}

impl WienerSeries {
    pub fn new(m_min: i64, dim: usize, coeffs: Vec<CMatrix>) -> Self {
        WienerSeries { m_min, dim, coeffs, tail_bound: 0.0 }
    }

    pub fn with_tail(mut self, tail: f64) -> Self {
        self.tail_bound = tail;
        self
    }

    pub fn constant(c: CMatrix) -> Self {
        let dim = c.dim();
        WienerSeries::new(0, dim, vec![c])
    }

    pub fn identity(dim: usize) -> Self {
        Self::constant(CMatrix::identity(dim))
    }

    pub fn m_min(&self) -> i64 {
        self.m_min
    }

    pub fn m_max(&self) -> i64 {
        self.m_min + self.coeffs.len() as i64 - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, m: i64) -> Option<&CMatrix> {
        if m < self.m_min {
            return None;
        }
        self.coeffs.get((m - self.m_min) as usize)
    }

    /// `sum_m a_m z^m` for |z| = 1 (any nonzero z is accepted).
    pub fn eval_z(&self, z: Complex64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(z);
            acc += c;
        }
        acc.scale(z.powi(self.m_min as i32))
    }

    pub fn eval_k(&self, k: f64) -> CMatrix {
        self.eval_z(Complex64::from_polar(1.0, k))
    }

    /// Wiener norm of the stored coefficients.
    pub fn norm(&self) -> f64 {
        let norms: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        pairwise_sum(&norms)
    }

    /// Upper bound on the norm of the untruncated series.
    pub fn norm_bound(&self) -> f64 {
        self.norm() + self.tail_bound
    }

    /// Coefficients of `f(z)*` on the circle, i.e. `sum a_m^* z^{-m}`.
    pub fn circle_adjoint(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.adjoint()).collect();
        WienerSeries { m_min: -self.m_max(), dim: self.dim, coeffs, tail_bound: self.tail_bound }
    }

    /// Multiplication by z^k.
    pub fn shift(mut self, k: i64) -> Self {
        self.m_min += k;
        self
    }

    /// Drops leading and trailing coefficients whose operator norm is at most
    /// `eps`, moving their norm into the tail bound.
    pub fn trim(mut self, eps: f64) -> Self {
        let norms: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        let Some(first) = norms.iter().position(|&n| n > eps) else {
            self.tail_bound += pairwise_sum(&norms);
            self.coeffs = vec![CMatrix::zeros(self.dim)];
            self.m_min = 0;
            return self;
        };
        let last = norms.iter().rposition(|&n| n > eps).unwrap_or(first);
        self.tail_bound += pairwise_sum(&norms[..first]) + pairwise_sum(&norms[last + 1..]);
        self.coeffs = self.coeffs[first..=last].to_vec();
        self.m_min += first as i64;
        self
    }

    /// Cauchy product. The tail bound follows from submultiplicativity.
    pub fn product(&self, other: &WienerSeries) -> Result<WienerSeries> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![CMatrix::zeros(self.dim); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].add_product(a, b);
            }
        }
        let (na, nb) = (self.norm(), other.norm());
        let tail = na * other.tail_bound + nb * self.tail_bound + self.tail_bound * other.tail_bound;
        Ok(WienerSeries { m_min: self.m_min + other.m_min, dim: self.dim, coeffs: out, tail_bound: tail })
    }

    pub fn add(&self, other: &WienerSeries) -> Result<WienerSeries> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let lo = self.m_min.min(other.m_min);
        let hi = self.m_max().max(other.m_max());
        let coeffs = (lo..=hi)
            .map(|m| {
                let mut c = CMatrix::zeros(self.dim);
                if let Some(a) = self.coeff(m) {
                    c += a;
                }
                if let Some(b) = other.coeff(m) {
                    c += b;
                }
                c
            })
            .collect();
        Ok(WienerSeries { m_min: lo, dim: self.dim, coeffs, tail_bound: self.tail_bound + other.tail_bound })
    }

    pub fn scale(&self, c: Complex64) -> WienerSeries {
        WienerSeries {
            m_min: self.m_min,
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
            tail_bound: self.tail_bound * c.norm(),
        }
    }
}

/// Wiener norm of a series.
pub fn wiener_norm(f: &WienerSeries) -> f64 {
    f.norm()
}

/// Product of two series.
pub fn wiener_product(f: &WienerSeries, g: &WienerSeries) -> Result<WienerSeries> {
    f.product(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: f64) -> CMatrix {
        CMatrix::scalar(1, Complex64::new(c, 0.0))
    }

    #[test]
    fn product_evaluates_pointwise() {
        let f = WienerSeries::new(-1, 1, vec![s(1.0), s(0.5), s(-2.0)]);
        let g = WienerSeries::new(2, 1, vec![s(3.0), s(0.25)]);
        let fg = f.product(&g).unwrap();
        for &k in &[0.0, 0.4, 2.9] {
            let lhs = fg.eval_k(k);
            let rhs = &f.eval_k(k) * &g.eval_k(k);
            assert!((lhs - rhs).max_abs() < 1e-14);
        }
        assert!(fg.norm() <= f.norm() * g.norm() + 1e-14);
    }

    #[test]
    fn adjoint_and_trim() {
        let f = WienerSeries::new(0, 1, vec![s(1e-20), s(2.0), s(0.0), s(1e-20)]);
        let t = f.clone().trim(1e-15);
        assert_eq!(t.m_min(), 1);
        assert_eq!(t.coeffs().len(), 1);
        assert!(t.tail_bound() > 0.0);
        let k = 0.8;
        let a = f.circle_adjoint().eval_k(k);
        assert!((a - f.eval_k(k).adjoint()).max_abs() < 1e-15);
    }
}
