use super::CMatrix;
use crate::error::{Error, Result};

/// Matrix-valued sequence on the integer window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSeq {
    lo: i64,
    dim: usize,
    values: Vec<CMatrix>,
}

impl MatrixSeq {
    pub fn new(lo: i64, dim: usize, values: Vec<CMatrix>) -> Self {
        debug_assert!(values.iter().all(|m| m.dim() == dim));
        MatrixSeq { lo, dim, values }
    }

    pub fn from_fn(lo: i64, hi: i64, dim: usize, mut f: impl FnMut(i64) -> CMatrix) -> Self {
        let values = (lo..=hi).map(&mut f).collect();
        MatrixSeq { lo, dim, values }
    }

    pub fn try_from_fn(
        lo: i64,
        hi: i64,
        dim: usize,
        mut f: impl FnMut(i64) -> Result<CMatrix>,
    ) -> Result<Self> {
        let values = (lo..=hi).map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(MatrixSeq { lo, dim, values })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last stored index; `lo - 1` when empty.
    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: i64) -> Option<&CMatrix> {
        if n < self.lo {
            return None;
        }
        self.values.get((n - self.lo) as usize)
    }

    pub fn at(&self, n: i64) -> Result<&CMatrix> {
        self.get(n).ok_or(Error::OutOfWindow(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CMatrix)> {
        self.values.iter().enumerate().map(move |(i, m)| (self.lo + i as i64, m))
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }
}

/// Pairwise summation of floats; the tree shape depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Pairwise summation of matrices.
pub fn pairwise_sum_matrices(xs: &[CMatrix], dim: usize) -> CMatrix {
    match xs.len() {
        0 => CMatrix::zeros(dim),
        1 => xs[0].clone(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum_matrices(a, dim) + pairwise_sum_matrices(b, dim)
        }
    }
}
