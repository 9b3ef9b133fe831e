//! Transfer matrices, the Cauchy problem and Jost solutions.
//!
//! Two independent constructions of the Jost solutions are provided: exact
//! substitution in the Volterra summation equation and the finite
//! transmutation series `z^{+-n}(I + sum B_m z^m)`.

use crate::algebra::{c64, CMatrix, Complex64, MatrixSeq, SpectralPoint};
use crate::error::{Error, Result};
use crate::potential::Potential;

/// Default radius of the excluded neighbourhoods of z = +-1 on the circle.
pub const DEFAULT_EDGE_EXCLUSION: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// u_+^z, free-like as n -> +inf
    Plus,
    /// u_-^{1/z}, free-like as n -> -inf
    Minus,
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Direction::Plus),
            "minus" | "-" => Ok(Direction::Minus),
            _ => Err(Error::Parse(format!("unknown direction '{s}'"))),
        }
    }
}

/// Rejects z in the excluded arcs around +-1 for circle points.
pub fn check_edge(point: &SpectralPoint, exclusion: f64) -> Result<()> {
    let z = point.z;
    if point.on_circle() && ((z - 1.0).norm() < exclusion || (z + 1.0).norm() < exclusion) {
        return Err(Error::BandEdge(z));
    }
    Ok(())
}

/// The 2L x 2L block matrix [[E - V(n), -I], [I, 0]].
pub fn transfer_matrix(v: &Potential, e: Complex64, n: i64) -> CMatrix {
    let l = v.dim();
    let id = CMatrix::identity(l);
    let top_left = &CMatrix::scalar(l, e) - &v.value(n);
    CMatrix::block2(&top_left, &(-&id), &id, &CMatrix::zeros(l))
}

/// The symplectic unit [[0, -I], [I, 0]].
pub fn symplectic_unit(l: usize) -> CMatrix {
    let id = CMatrix::identity(l);
    CMatrix::block2(&CMatrix::zeros(l), &(-&id), &id, &CMatrix::zeros(l))
}

/// Transfer matrices of one energy over a window of sites.
#[derive(Clone, Debug)]
pub struct TransferState {
    pub energy: Complex64,
    lo: i64,
    matrices: Vec<CMatrix>,
    conj_matrices: Vec<CMatrix>,
    unit: CMatrix,
}

impl TransferState {
    pub fn new(v: &Potential, energy: Complex64, lo: i64, hi: i64) -> Self {
        let matrices = (lo..=hi).map(|n| transfer_matrix(v, energy, n)).collect();
        let conj_matrices = (lo..=hi).map(|n| transfer_matrix(v, energy.conj(), n)).collect();
        TransferState { energy, lo, matrices, conj_matrices, unit: symplectic_unit(v.dim()) }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.matrices.len() as i64 - 1)
    }

    pub fn matrix(&self, n: i64) -> Result<&CMatrix> {
        self.index(n).map(|i| &self.matrices[i])
    }

    /// Inverse through the conjugation identity with the symplectic unit.
    pub fn inverse(&self, n: i64) -> Result<CMatrix> {
        let i = self.index(n)?;
        Ok(&(&self.unit * &self.conj_matrices[i].adjoint()) * &self.unit.adjoint())
    }

    /// T(n-1) ... T(m) for m <= n; the identity when m == n.
    pub fn product(&self, m: i64, n: i64) -> Result<CMatrix> {
        let l2 = self.unit.dim();
        let mut acc = CMatrix::identity(l2);
        for k in m..n {
            acc = self.matrix(k)? * &acc;
        }
        Ok(acc)
    }

    fn index(&self, n: i64) -> Result<usize> {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.matrices.len() {
            return Err(Error::OutOfWindow(n));
        }
        Ok(i as usize)
    }
}

/// Solves u(n+1) + u(n-1) + (V(n) - E) u(n) = 0 with u(n0) = a0, u(n0+1) = b0
/// on `[lo, hi]` by propagating [u(n+1); u(n)] with transfer matrices.
pub fn solve_cauchy(
    v: &Potential,
    e: Complex64,
    n0: i64,
    a0: &CMatrix,
    b0: &CMatrix,
    window: (i64, i64),
) -> Result<MatrixSeq> {
    let (lo, hi) = window;
    let l = v.dim();
    if n0 < lo || n0 + 1 > hi {
        return Err(Error::InvalidParameter(format!(
            "window [{lo}, {hi}] must contain n0 = {n0} and n0 + 1"
        )));
    }
    if a0.dim() != l || b0.dim() != l {
        return Err(Error::DimensionMismatch { expected: l, found: a0.dim().max(b0.dim()) });
    }
    let ts = TransferState::new(v, e, lo, hi);
    let mut values = vec![CMatrix::zeros(l); (hi - lo + 1) as usize];
    let idx = |n: i64| (n - lo) as usize;
    values[idx(n0)] = a0.clone();
    values[idx(n0 + 1)] = b0.clone();

    let stack = |top: &CMatrix, bottom: &CMatrix| {
        CMatrix::block2(top, &CMatrix::zeros(l), bottom, &CMatrix::zeros(l))
    };
    let mut phi = stack(b0, a0);
    for n in (n0 + 1)..hi {
        phi = ts.matrix(n)? * &phi;
        values[idx(n + 1)] = phi.block(0, 0, l);
    }
    let mut phi = stack(b0, a0);
    for n in ((lo + 1)..=n0).rev() {
        phi = &ts.inverse(n)? * &phi;
        values[idx(n - 1)] = phi.block(1, 0, l);
    }
    Ok(MatrixSeq::new(lo, l, values))
}

/// S^z(n) = (z^n - z^{-n}) / (z - z^{-1}), with the limits (+-1)^{n+1} n at
/// z = +-1. Near the band edges the equivalent finite sum
/// `sum_{j=0}^{n-1} z^{n-1-2j}` is used.
pub fn s_kernel(z: Complex64, n: i64) -> Result<Complex64> {
    if z == c64(0.0, 0.0) {
        return Err(Error::ZeroPoint);
    }
    if n == 0 {
        return Ok(c64(0.0, 0.0));
    }
    if n < 0 {
        return s_kernel(z, -n).map(|s| -s);
    }
    if (z * z - 1.0).norm() < 1e-6 {
        let z2 = z * z;
        let mut term = z.powi((n - 1) as i32);
        let inv2 = z2.inv();
        let mut acc = c64(0.0, 0.0);
        for _ in 0..n {
            acc += term;
            term *= inv2;
        }
        return Ok(acc);
    }
    let zn = z.powi(n as i32);
    Ok((zn - zn.inv()) / (z - z.inv()))
}

/// Evaluates one Jost solution at arbitrary sites after solving the
/// Volterra equation on the support.
#[derive(Clone, Debug)]
pub struct JostEvaluator {
    direction: Direction,
    z: Complex64,
    dim: usize,
    sites: Vec<i64>,
    /// V(j) u(j) at the support sites
    vu: Vec<CMatrix>,
}

impl JostEvaluator {
    /// No edge exclusion is applied here. At z = +-1 the kernel takes its
    /// limit form, which the band-edge diagnostics rely on.
    pub fn new(v: &Potential, z: Complex64, direction: Direction) -> Result<Self> {
        if z == c64(0.0, 0.0) {
            return Err(Error::ZeroPoint);
        }
        let mut ev = JostEvaluator {
            direction,
            z,
            dim: v.dim(),
            sites: v.sites().to_vec(),
            vu: vec![CMatrix::zeros(v.dim()); v.sites().len()],
        };
        let order: Vec<usize> = match direction {
            Direction::Plus => (0..ev.sites.len()).rev().collect(),
            Direction::Minus => (0..ev.sites.len()).collect(),
        };
        for i in order {
            let u = ev.at(ev.sites[i]);
            ev.vu[i] = &v.values()[i] * &u;
        }
        Ok(ev)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// The free part z^{+-n}.
    fn free(&self, n: i64) -> Complex64 {
        match self.direction {
            Direction::Plus => self.z.powi(n as i32),
            Direction::Minus => self.z.powi(-n as i32),
        }
    }

    pub fn at(&self, n: i64) -> CMatrix {
        let mut u = CMatrix::scalar(self.dim, self.free(n));
        for (j, vu) in self.sites.iter().zip(&self.vu) {
            let d = match self.direction {
                Direction::Plus if *j > n => j - n,
                Direction::Minus if *j < n => n - j,
                _ => continue,
            };
            let s = s_kernel(self.z, d).expect("z != 0 checked at construction");
            u.axpy(-s, vu);
        }
        u
    }

    /// True where u is exactly the free solution.
    pub fn is_free_at(&self, n: i64) -> bool {
        match (self.direction, self.sites.first(), self.sites.last()) {
            (_, None, _) => true,
            (Direction::Plus, _, Some(&b)) => n >= b,
            (Direction::Minus, Some(&a), _) => n <= a,
            _ => true,
        }
    }

    /// z^{-+n} u(n); exactly I where u is free.
    pub fn tilde(&self, n: i64) -> CMatrix {
        if self.is_free_at(n) {
            return CMatrix::identity(self.dim);
        }
        self.at(n).scale(self.free(n).inv())
    }
}

/// A Jost solution stored on a window.
#[derive(Clone, Debug)]
pub struct JostSolution {
    pub direction: Direction,
    pub point: SpectralPoint,
    pub values: MatrixSeq,
    /// last support site on the free side (max for plus, min for minus)
    pub free_edge: Option<i64>,
}

impl JostSolution {
    pub fn window(&self) -> (i64, i64) {
        (self.values.lo(), self.values.hi())
    }

    pub fn at(&self, n: i64) -> Result<&CMatrix> {
        self.values.at(n)
    }

    /// Free-normalized value z^{-+n} u(n), exactly I beyond the support.
    pub fn tilde(&self, n: i64) -> Result<CMatrix> {
        let free = match (self.direction, self.free_edge) {
            (_, None) => true,
            (Direction::Plus, Some(b)) => n >= b,
            (Direction::Minus, Some(a)) => n <= a,
        };
        if free {
            self.values.at(n)?;
            return Ok(CMatrix::identity(self.values.dim()));
        }
        let z = self.point.z;
        let f = match self.direction {
            Direction::Plus => z.powi(-n as i32),
            Direction::Minus => z.powi(n as i32),
        };
        Ok(self.values.at(n)?.scale(f))
    }

    /// max over interior n of the scaled residual of tau u = E u.
    pub fn residual(&self, v: &Potential) -> f64 {
        difference_residual(v, self.point.energy, &self.values)
    }
}

/// max over interior sites of
/// `||u(n+1) + u(n-1) + (V(n) - E) u(n)|| / (1 + ||u(n+1)|| + ||u(n-1)|| + (|E| + ||V(n)||) ||u(n)||)`.
pub fn difference_residual(v: &Potential, e: Complex64, u: &MatrixSeq) -> f64 {
    let l = u.dim();
    let mut worst: f64 = 0.0;
    for n in (u.lo() + 1)..u.hi() {
        let (a, b, c) = (&u.values()[(n - 1 - u.lo()) as usize], &u.values()[(n - u.lo()) as usize], &u.values()[(n + 1 - u.lo()) as usize]);
        let vn = v.value(n);
        let mut r = a + c;
        r.add_product(&(&vn - &CMatrix::scalar(l, e)), b);
        let scale = 1.0 + a.norm() + c.norm() + (e.norm() + vn.norm()) * b.norm();
        worst = worst.max(r.norm() / scale);
    }
    worst
}

fn check_window(v: &Potential, window: (i64, i64)) -> Result<()> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty window [{lo}, {hi}]")));
    }
    if let (Some(min), Some(max)) = (v.min_site(), v.max_site()) {
        if lo > min || hi < max {
            return Err(Error::WindowTooSmall { lo, hi, min, max });
        }
    }
    Ok(())
}

/// Default window: the support hull widened by 50 on both sides.
pub fn default_window(v: &Potential) -> (i64, i64) {
    let (a, b) = v.hull();
    (a - 50, b + 50)
}

/// Jost solution by exact substitution in the Volterra equation.
pub fn jost_volterra(
    v: &Potential,
    point: &SpectralPoint,
    direction: Direction,
    window: (i64, i64),
    edge_exclusion: f64,
) -> Result<JostSolution> {
    check_window(v, window)?;
    check_edge(point, edge_exclusion)?;
    let ev = JostEvaluator::new(v, point.z, direction)?;
    let values = MatrixSeq::from_fn(window.0, window.1, v.dim(), |n| ev.at(n));
    let free_edge = match direction {
        Direction::Plus => v.max_site(),
        Direction::Minus => v.min_site(),
    };
    Ok(JostSolution { direction, point: *point, values, free_edge })
}

/// Transmutation coefficients B_m(n), m = 0..M(n), on a window.
#[derive(Clone, Debug)]
pub struct TransmutationTable {
    pub direction: Direction,
    dim: usize,
    lo: i64,
    coeffs: Vec<Vec<CMatrix>>,
}

impl TransmutationTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.coeffs.len() as i64 - 1)
    }

    /// B_0(n), B_1(n), ... up to the last index that may be nonzero.
    pub fn at(&self, n: i64) -> Result<&[CMatrix]> {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.coeffs.len() {
            return Err(Error::OutOfWindow(n));
        }
        Ok(&self.coeffs[i as usize])
    }
}

/// Exact finite recursion for B_m^{+-}(n) on `window`.
pub fn transmutation_coeffs(v: &Potential, direction: Direction, window: (i64, i64)) -> TransmutationTable {
    let (lo, hi) = window;
    let l = v.dim();
    let id = CMatrix::identity(l);
    let mut coeffs: Vec<Vec<CMatrix>> = vec![vec![id.clone()]; (hi - lo + 1).max(0) as usize];
    let store = |coeffs: &mut Vec<Vec<CMatrix>>, n: i64, b: &Vec<CMatrix>| {
        if n >= lo && n <= hi {
            coeffs[(n - lo) as usize] = b.clone();
        }
    };
    if v.sites().is_empty() {
        return TransmutationTable { direction, dim: l, lo, coeffs };
    }
    // Plus walks down from the right end of the support, minus walks up from the left end.
    let (edge, step, beyond): (i64, i64, i64) = match direction {
        Direction::Plus => (v.max_site().unwrap(), -1, lo),
        Direction::Minus => (v.min_site().unwrap(), 1, hi),
    };
    let mut prev = vec![id.clone()];
    let mut acc: Vec<CMatrix> = Vec::new();
    let mut n = edge;
    loop {
        let past = match direction {
            Direction::Plus => n < beyond,
            Direction::Minus => n > beyond,
        };
        if past {
            break;
        }
        if n != edge {
            // fold in the site just passed
            if let Some(vn) = v.at(n - step) {
                if acc.len() < prev.len() {
                    acc.resize(prev.len(), CMatrix::zeros(l));
                }
                for (a, b) in acc.iter_mut().zip(&prev) {
                    a.add_product(vn, b);
                }
            }
            let len = 2 * (edge - n).unsigned_abs() as usize + 2;
            let mut cur = Vec::with_capacity(len);
            cur.push(id.clone());
            for m in 1..len {
                let mut b = match acc.get(m - 1) {
                    Some(a) => -a,
                    None => CMatrix::zeros(l),
                };
                if m >= 3 {
                    if let Some(p) = prev.get(m - 2) {
                        b += p;
                    }
                }
                cur.push(b);
            }
            while cur.len() > 1 && cur.last().is_some_and(|b| b.is_zero()) {
                cur.pop();
            }
            prev = cur;
        }
        store(&mut coeffs, n, &prev);
        n += step;
    }
    TransmutationTable { direction, dim: l, lo, coeffs }
}

/// z^{+-n} (I + sum_{m>=1} B_m(n) z^m).
pub fn jost_series(table: &TransmutationTable, point: &SpectralPoint, n: i64) -> Result<CMatrix> {
    let z = point.z;
    if z == c64(0.0, 0.0) {
        return Err(Error::ZeroPoint);
    }
    let b = table.at(n)?;
    let poly = horner(b, z, table.dim);
    let f = match table.direction {
        Direction::Plus => z.powi(n as i32),
        Direction::Minus => z.powi(-n as i32),
    };
    Ok(poly.scale(f))
}

pub(crate) fn horner(b: &[CMatrix], z: Complex64, dim: usize) -> CMatrix {
    let mut acc = CMatrix::zeros(dim);
    for c in b.iter().rev() {
        acc = acc.scale(z);
        acc += c;
    }
    acc
}
