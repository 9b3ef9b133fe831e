//! Wronskians, the scattering matrices M, N, T, R and a grid-based
//! genericity test.

use rayon::prelude::*;

use crate::algebra::{c64, CMatrix, Complex64, MatrixSeq, SpectralPoint};
use crate::error::{Error, Result};
use crate::jost::{check_edge, Direction, JostEvaluator, DEFAULT_EDGE_EXCLUSION};
use crate::potential::Potential;

/// Numerical thresholds shared by the scattering and resolvent code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// condition number above which M_+- or a Wronskian counts as singular
    pub max_condition: f64,
    /// |det W| floor of the genericity test
    pub det_floor: f64,
    /// radius of the excluded arcs around +-1
    pub edge_exclusion: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { max_condition: 1e12, det_floor: 1e-8, edge_exclusion: DEFAULT_EDGE_EXCLUSION }
    }
}

/// W(u, v)(n) = i (u(n+1)* v(n) - u(n)* v(n+1)).
pub fn wronskian(u: &MatrixSeq, v: &MatrixSeq, n: i64) -> Result<CMatrix> {
    Ok(wronskian_values(u.at(n)?, u.at(n + 1)?, v.at(n)?, v.at(n + 1)?))
}

pub(crate) fn wronskian_values(u0: &CMatrix, u1: &CMatrix, v0: &CMatrix, v1: &CMatrix) -> CMatrix {
    (&u1.adjoint() * v0 - &u0.adjoint() * v1).scale(c64(0.0, 1.0))
}

/// Wronskian of two evaluators at site n.
pub fn wronskian_eval(u: &JostEvaluator, v: &JostEvaluator, n: i64) -> CMatrix {
    wronskian_values(&u.at(n), &u.at(n + 1), &v.at(n), &v.at(n + 1))
}

/// max_n ||W(u,v)(n) - W(u,v)(lo)|| over the common window.
pub fn wronskian_constancy_check(u: &MatrixSeq, v: &MatrixSeq) -> f64 {
    let lo = u.lo().max(v.lo());
    let hi = u.hi().min(v.hi());
    if hi <= lo {
        return 0.0;
    }
    let w0 = wronskian(u, v, lo).expect("inside the common window");
    ((lo + 1)..hi)
        .map(|n| (wronskian(u, v, n).expect("inside the common window") - &w0).norm())
        .fold(0.0, f64::max)
}

/// nu^z = i / (z - 1/z)
pub fn nu(z: Complex64) -> Complex64 {
    c64(0.0, 1.0) / (z - z.inv())
}

/// The four Jost solutions needed at a circle point z:
/// u_+^z, u_+^{1/z}, u_-^{1/z}, u_-^z.
#[derive(Clone, Debug)]
pub struct JostQuad {
    pub plus_z: JostEvaluator,
    pub plus_zi: JostEvaluator,
    pub minus_zi: JostEvaluator,
    pub minus_z: JostEvaluator,
}

impl JostQuad {
    pub fn new(v: &Potential, z: Complex64) -> Result<Self> {
        let zi = z.inv();
        Ok(JostQuad {
            plus_z: JostEvaluator::new(v, z, Direction::Plus)?,
            plus_zi: JostEvaluator::new(v, zi, Direction::Plus)?,
            // a minus evaluator at w represents u_-^{1/w}
            minus_zi: JostEvaluator::new(v, z, Direction::Minus)?,
            minus_z: JostEvaluator::new(v, zi, Direction::Minus)?,
        })
    }
}

/// Site where all Wronskians are evaluated.
pub fn wronskian_site(v: &Potential) -> i64 {
    v.max_site().unwrap_or(0) + 1
}

/// Scattering data at a circle point z != +-1.
#[derive(Clone, Debug)]
pub struct ScatteringData {
    pub point: SpectralPoint,
    pub nu: Complex64,
    pub m_plus: CMatrix,
    pub n_plus: CMatrix,
    pub m_minus: CMatrix,
    pub n_minus: CMatrix,
    pub t_plus: CMatrix,
    pub t_minus: CMatrix,
    pub r_plus: CMatrix,
    pub r_minus: CMatrix,
    /// det W(u_-^z, u_+^z)
    pub det_w: Complex64,
}

/// Scattering matrices with the default thresholds.
pub fn scattering_matrices(v: &Potential, point: &SpectralPoint) -> Result<ScatteringData> {
    scattering_matrices_with(v, point, &Thresholds::default())
}

pub fn scattering_matrices_with(v: &Potential, point: &SpectralPoint, th: &Thresholds) -> Result<ScatteringData> {
    if !point.on_circle() {
        return Err(Error::InvalidParameter(format!("scattering needs |z| = 1, got z = {}", point.z)));
    }
    check_edge(point, th.edge_exclusion)?;
    let quad = JostQuad::new(v, point.z)?;
    scattering_from_quad(v, point, &quad, th)
}

pub(crate) fn scattering_from_quad(
    v: &Potential,
    point: &SpectralPoint,
    q: &JostQuad,
    th: &Thresholds,
) -> Result<ScatteringData> {
    let z = point.z;
    let n = wronskian_site(v);
    let nu = nu(z);
    let w_mp = wronskian_eval(&q.minus_z, &q.plus_z, n);
    let m_plus = w_mp.scale(nu);
    let n_plus = wronskian_eval(&q.minus_zi, &q.plus_z, n).scale(-nu);
    let m_minus = wronskian_eval(&q.plus_zi, &q.minus_zi, n).scale(-nu);
    let n_minus = wronskian_eval(&q.plus_z, &q.minus_zi, n).scale(nu);
    let t_plus = m_plus.checked_inverse("M_+", z, th.max_condition)?;
    let t_minus = m_minus.checked_inverse("M_-", z, th.max_condition)?;
    let r_plus = -(&n_plus * &t_plus);
    let r_minus = -(&n_minus * &t_minus);
    Ok(ScatteringData {
        point: *point,
        nu,
        m_plus,
        n_plus,
        m_minus,
        n_minus,
        t_plus,
        t_minus,
        r_plus,
        r_minus,
        det_w: w_mp.det(),
    })
}

/// max over `window` of ||u_+^z T_+ - u_-^z + u_-^{1/z} R_+||, relative to 1 + the largest term.
pub fn transmission_relation_residual(v: &Potential, data: &ScatteringData, window: (i64, i64)) -> Result<f64> {
    let q = JostQuad::new(v, data.point.z)?;
    let mut worst: f64 = 0.0;
    for n in window.0..=window.1 {
        let a = &q.plus_z.at(n) * &data.t_plus;
        let b = q.minus_z.at(n);
        let c = &q.minus_zi.at(n) * &data.r_plus;
        let scale = 1.0 + a.norm().max(b.norm()).max(c.norm());
        worst = worst.max((&(&a - &b) + &c).norm() / scale);
    }
    Ok(worst)
}

/// Evidence for or against genericity.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GenericityReport {
    /// verdict from the circle grid outside the excluded arcs
    pub generic: bool,
    pub min_abs_det: f64,
    pub argmin_re: f64,
    pub argmin_im: f64,
    pub grid_size: usize,
    /// (distance from +-1, min |det W|) on arcs shrinking toward the band edges
    pub edge_profile: Vec<(f64, f64)>,
    /// |det W(u_-^z, u_+^z)| exactly at z = 1 and z = -1
    pub edge_det: [f64; 2],
    /// a Wronskian is singular exactly at a band edge
    pub edge_resonance: bool,
}

impl GenericityReport {
    pub fn argmin(&self) -> Complex64 {
        c64(self.argmin_re, self.argmin_im)
    }
}

fn det_pair(v: &Potential, z: Complex64) -> Result<f64> {
    let q = JostQuad::new(v, z)?;
    let n = wronskian_site(v);
    let a = wronskian_eval(&q.minus_z, &q.plus_z, n).det().norm();
    let b = wronskian_eval(&q.plus_zi, &q.minus_zi, n).det().norm();
    Ok(a.min(b))
}

/// Grid-based genericity test with the default thresholds.
pub fn is_generic(v: &Potential, grid_size: usize) -> GenericityReport {
    is_generic_with(v, grid_size, &Thresholds::default())
}

pub fn is_generic_with(v: &Potential, grid_size: usize, th: &Thresholds) -> GenericityReport {
    let grid: Vec<Complex64> = (0..grid_size)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / grid_size as f64))
        .filter(|z| (z - 1.0).norm() >= th.edge_exclusion && (z + 1.0).norm() >= th.edge_exclusion)
        .collect();
    let dets: Vec<(f64, Complex64)> = grid
        .par_iter()
        .map(|&z| (det_pair(v, z).unwrap_or(0.0), z))
        .collect();
    let (min_abs_det, argmin) = dets
        .iter()
        .copied()
        .fold((f64::INFINITY, c64(1.0, 0.0)), |acc, d| if d.0 < acc.0 { d } else { acc });

    let edge_profile = (0..8)
        .map(|j| {
            let dist = th.edge_exclusion * 0.5f64.powi(j);
            let theta = 2.0 * (dist / 2.0).asin();
            let pts = [theta, -theta, std::f64::consts::PI - theta, theta - std::f64::consts::PI];
            let m = pts
                .iter()
                .map(|&a| det_pair(v, Complex64::from_polar(1.0, a)).unwrap_or(0.0))
                .fold(f64::INFINITY, f64::min);
            (dist, m)
        })
        .collect();

    let edge = |z: Complex64| -> f64 {
        JostQuad::new(v, z)
            .map(|q| wronskian_eval(&q.minus_z, &q.plus_z, wronskian_site(v)).det().norm())
            .unwrap_or(0.0)
    };
    let edge_det = [edge(c64(1.0, 0.0)), edge(c64(-1.0, 0.0))];
    GenericityReport {
        generic: min_abs_det > th.det_floor,
        min_abs_det,
        argmin_re: argmin.re,
        argmin_im: argmin.im,
        grid_size,
        edge_profile,
        edge_det,
        edge_resonance: edge_det.iter().any(|&d| d < th.det_floor),
    }
}
