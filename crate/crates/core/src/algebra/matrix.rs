use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex square matrix. All norms are operator (spectral) norms
/// unless the method name says otherwise.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<Complex64>);

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        CMatrix(DMatrix::identity(dim, dim))
    }

    pub fn scalar(dim: usize, c: Complex64) -> Self {
        CMatrix(DMatrix::from_diagonal_element(dim, dim, c))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        CMatrix(DMatrix::from_fn(dim, dim, |i, j| f(i, j)))
    }

    /// Builds a matrix from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: im.len() });
        }
        for row in re.iter().chain(im.iter()) {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
        }
        Ok(Self::from_fn(dim, |i, j| Complex64::new(re[i][j], im[i][j])))
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Self {
        assert!(m.is_square(), "CMatrix must be square");
        CMatrix(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CMatrix(&self.0 * c)
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: Complex64, other: &CMatrix) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += c * b;
        }
    }

    /// `self += a * b` without a temporary.
    pub fn add_product(&mut self, a: &CMatrix, b: &CMatrix) {
        self.0.gemm(ONE, &a.0, &b.0, ONE);
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == ZERO)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        match self.dim() {
            0 => vec![],
            1 => vec![self.0[(0, 0)].norm()],
            2 => {
                let f2 = self.0.iter().map(|c| c.norm_sqr()).sum::<f64>();
                let d = self.det().norm();
                let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
                let s1 = ((f2 + disc) / 2.0).sqrt();
                let s2 = if s1 > 0.0 { d / s1 } else { 0.0 };
                vec![s1, s2]
            }
            _ => {
                let mut s: Vec<f64> = self.0.clone().singular_values().iter().copied().collect();
                s.sort_by(|a, b| b.total_cmp(a));
                s
            }
        }
    }

    /// Operator norm.
    pub fn norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// sigma_max / sigma_min; infinite when singular.
    pub fn condition(&self) -> f64 {
        let s = self.singular_values();
        match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            (Some(_), Some(_)) => f64::INFINITY,
            _ => 1.0,
        }
    }

    pub fn det(&self) -> Complex64 {
        match self.dim() {
            0 => ONE,
            1 => self.0[(0, 0)],
            2 => self.0[(0, 0)] * self.0[(1, 1)] - self.0[(0, 1)] * self.0[(1, 0)],
            _ => self.0.clone().determinant(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.dim() == 1 {
            let a = self.0[(0, 0)];
            return (a != ZERO).then(|| CMatrix::scalar(1, a.inv()));
        }
        self.0.clone().try_inverse().map(CMatrix)
    }

    /// Inverse with a condition-number guard.
    pub fn checked_inverse(&self, what: &'static str, z: Complex64, max_cond: f64) -> Result<Self> {
        let cond = self.condition();
        if !(cond <= max_cond) {
            return Err(Error::Singular { what, z, cond });
        }
        self.inverse().ok_or(Error::Singular { what, z, cond })
    }

    /// max |A - A*| entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                d = d.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// 2x2 block matrix [[a, b], [c, d]].
    pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> Self {
        let l = a.dim();
        let mut m = DMatrix::zeros(2 * l, 2 * l);
        m.view_mut((0, 0), (l, l)).copy_from(&a.0);
        m.view_mut((0, l), (l, l)).copy_from(&b.0);
        m.view_mut((l, 0), (l, l)).copy_from(&c.0);
        m.view_mut((l, l), (l, l)).copy_from(&d.0);
        CMatrix(m)
    }

    /// Block (i, j) of size `l` of a block matrix.
    pub fn block(&self, i: usize, j: usize, l: usize) -> Self {
        CMatrix(self.0.view((i * l, j * l), (l, l)).into_owned())
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        write!(f, "[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                let c = self.0[(i, j)];
                write!(f, "{:.6}{:+.6}i", c.re, c.im)?;
            }
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $f(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $f(self, rhs: CMatrix) -> CMatrix {
                CMatrix(self.0 $op rhs.0)
            }
        }
        impl $tr<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $f(self, rhs: &CMatrix) -> CMatrix {
                CMatrix(self.0 $op &rhs.0)
            }
        }
        impl $tr<CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $f(self, rhs: CMatrix) -> CMatrix {
                CMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<Complex64> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, c: Complex64) -> CMatrix {
        CMatrix(&self.0 * c)
    }
}

impl Mul<Complex64> for CMatrix {
    type Output = CMatrix;
    fn mul(self, c: Complex64) -> CMatrix {
        CMatrix(self.0 * c)
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-self.0)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix(-&self.0)
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&CMatrix> for CMatrix {
    fn sub_assign(&mut self, rhs: &CMatrix) {
        self.0 -= &rhs.0;
    }
}
