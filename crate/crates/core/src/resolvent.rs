//! Resolvent kernel off the spectrum, its boundary values on (-2, 2),
//! weighted resolvent norms and Holder diagnostics.

use faer::complex_native::c64 as fc64;
use faer::Mat;
use rayon::prelude::*;

use crate::algebra::{c64, inverse_zhukovsky, pairwise_sum, CMatrix, Complex64, Side, SpectralPoint};
use crate::error::{Error, Result};
use crate::jost::{check_edge, Direction, JostEvaluator};
use crate::oracle::{max_singular_value, to_faer, TruncatedOperator};
use crate::potential::Potential;
use crate::scattering::{scattering_from_quad, wronskian_eval, wronskian_site, JostQuad, ScatteringData, Thresholds};

/// Where a resolvent is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnergyArg {
    /// E outside [-2, 2]
    Off(Complex64),
    /// E in (-2, 2), boundary value from above (plus) or below (minus)
    Boundary(f64, Side),
}

impl EnergyArg {
    pub fn point(&self) -> Result<SpectralPoint> {
        match *self {
            EnergyArg::Off(e) => {
                if e.im == 0.0 && e.re.abs() <= 2.0 {
                    return Err(Error::InvalidParameter(format!(
                        "E = {e} lies on the continuous spectrum; use a boundary value"
                    )));
                }
                SpectralPoint::from_energy(e, Side::Plus)
            }
            EnergyArg::Boundary(e, side) => {
                if !(e > -2.0 && e < 2.0) {
                    return Err(Error::InvalidParameter(format!("boundary energy {e} not in (-2, 2)")));
                }
                SpectralPoint::from_energy(c64(e, 0.0), side)
            }
        }
    }

    pub fn energy(&self) -> Complex64 {
        match *self {
            EnergyArg::Off(e) => e,
            EnergyArg::Boundary(e, _) => c64(e, 0.0),
        }
    }
}

/// Resolvent kernel through Jost solutions and Wronskians:
///
/// s >= r: -i u_+^z(s) W(u_-^{1/zbar}, u_+^z)^{-1} u_-^{1/zbar}(r)*
/// s <  r: +i u_-^{1/z}(s) W(u_+^{zbar}, u_-^{1/z})^{-1} u_+^{zbar}(r)*
///
/// For |z| = 1 this is the boundary value at z = r_+-(E).
#[derive(Clone, Debug)]
pub struct GreenFunction {
    pub point: SpectralPoint,
    plus_z: JostEvaluator,
    minus_zbar_inv: JostEvaluator,
    minus_z_inv: JostEvaluator,
    plus_zbar: JostEvaluator,
    /// -i W1^{-1}
    left: CMatrix,
    /// +i W2^{-1}
    right: CMatrix,
}

impl GreenFunction {
    pub fn new(v: &Potential, arg: EnergyArg, th: &Thresholds) -> Result<Self> {
        let point = arg.point()?;
        check_edge(&point, th.edge_exclusion)?;
        let z = point.z;
        let zb = z.conj();
        let plus_z = JostEvaluator::new(v, z, Direction::Plus)?;
        let minus_zbar_inv = JostEvaluator::new(v, zb, Direction::Minus)?;
        let minus_z_inv = JostEvaluator::new(v, z, Direction::Minus)?;
        let plus_zbar = JostEvaluator::new(v, zb, Direction::Plus)?;
        let n = wronskian_site(v);
        let fail = |e: Error| match (arg, e) {
            (EnergyArg::Off(en), Error::Singular { .. }) => Error::EigenvalueProximity(en),
            (_, e) => e,
        };
        let w1 = wronskian_eval(&minus_zbar_inv, &plus_z, n);
        let w2 = wronskian_eval(&plus_zbar, &minus_z_inv, n);
        let left = w1.checked_inverse("W(u_-, u_+)", z, th.max_condition).map_err(fail)?.scale(c64(0.0, -1.0));
        let right = w2.checked_inverse("W(u_+, u_-)", z, th.max_condition).map_err(fail)?.scale(c64(0.0, 1.0));
        Ok(GreenFunction { point, plus_z, minus_zbar_inv, minus_z_inv, plus_zbar, left, right })
    }

    pub fn kernel(&self, s: i64, r: i64) -> CMatrix {
        if s >= r {
            &(&self.plus_z.at(s) * &self.left) * &self.minus_zbar_inv.at(r).adjoint()
        } else {
            &(&self.minus_z_inv.at(s) * &self.right) * &self.plus_zbar.at(r).adjoint()
        }
    }

    /// All blocks for s, r in `[lo, hi]`, row-major by s.
    pub fn kernel_window(&self, lo: i64, hi: i64) -> Vec<CMatrix> {
        let sites: Vec<i64> = (lo..=hi).collect();
        let a: Vec<CMatrix> = sites.iter().map(|&s| &self.plus_z.at(s) * &self.left).collect();
        let b: Vec<CMatrix> = sites.iter().map(|&r| self.minus_zbar_inv.at(r).adjoint()).collect();
        let c: Vec<CMatrix> = sites.iter().map(|&s| &self.minus_z_inv.at(s) * &self.right).collect();
        let d: Vec<CMatrix> = sites.iter().map(|&r| self.plus_zbar.at(r).adjoint()).collect();
        (0..sites.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let (a, b, c, d) = (&a, &b, &c, &d);
                (0..sites.len()).map(move |j| if i >= j { &a[i] * &b[j] } else { &c[i] * &d[j] })
            })
            .collect()
    }
}

/// Resolvent kernel [R_H(E)]_{s,r} for E off [-2, 2].
pub fn green_kernel(v: &Potential, e: Complex64, s: i64, r: i64) -> Result<CMatrix> {
    Ok(GreenFunction::new(v, EnergyArg::Off(e), &Thresholds::default())?.kernel(s, r))
}

/// Rejects energies within 1e-6 of an eigenvalue of the truncated operator.
pub fn prescreen_energy(v: &Potential, e: Complex64, n: i64) -> Result<()> {
    let h = TruncatedOperator::new(v, n)?;
    if h.spectral_distance(e)? < 1e-6 {
        return Err(Error::EigenvalueProximity(e));
    }
    Ok(())
}

/// f_{s,r}(z): for s >= r, ut_+(s) T_+ ut_-(r)*; for s < r, ut_-(s) T_- ut_+(r)*,
/// with the free-normalized Jost solutions attached to the circle point z.
pub(crate) fn density_from_quad(q: &JostQuad, d: &ScatteringData, s: i64, r: i64) -> CMatrix {
    if s >= r {
        &(&q.plus_z.tilde(s) * &d.t_plus) * &q.minus_z.tilde(r).adjoint()
    } else {
        &(&q.minus_zi.tilde(s) * &d.t_minus) * &q.plus_zi.tilde(r).adjoint()
    }
}

/// Boundary value [R_H(E +- i0)]_{s,r} from the transmission coefficients:
/// w^{|s-r|} / (w - 1/w) f_{s,r}(w) with w = r_+-(E).
pub fn green_boundary(v: &Potential, e: f64, side: Side, s: i64, r: i64) -> Result<CMatrix> {
    let point = EnergyArg::Boundary(e, side).point()?;
    let th = Thresholds::default();
    check_edge(&point, th.edge_exclusion)?;
    let w = point.z;
    let q = JostQuad::new(v, w)?;
    let d = scattering_from_quad(v, &point, &q, &th)?;
    let pref = w.powi((s - r).unsigned_abs() as i32) / (w - w.inv());
    Ok(density_from_quad(&q, &d, s, r).scale(pref))
}

/// max over `sites` x `cols` of ||R(s+1,r) + R(s-1,r) + (V(s) - E) R(s,r) - delta_{s,r} I||.
pub fn kernel_residual(
    v: &Potential,
    e: Complex64,
    kernel: impl Fn(i64, i64) -> CMatrix,
    sites: impl IntoIterator<Item = i64>,
    cols: &[i64],
) -> f64 {
    let l = v.dim();
    let mut worst: f64 = 0.0;
    for s in sites {
        for &r in cols {
            let mut res = kernel(s + 1, r) + kernel(s - 1, r);
            res.add_product(&(&v.value(s) - &CMatrix::scalar(l, e)), &kernel(s, r));
            if s == r {
                res -= &CMatrix::identity(l);
            }
            worst = worst.max(res.norm());
        }
    }
    worst
}

/// Riemann zeta for real s > 1 (Euler-Maclaurin after 64 terms).
pub fn zeta(s: f64) -> f64 {
    let m = 64.0f64;
    let head: Vec<f64> = (1..64).map(|k| (k as f64).powf(-s)).collect();
    pairwise_sum(&head) + m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s * m.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * m.powf(-s - 3.0) / 720.0
}

/// C(alpha) = sum_{r in Z} (1+|r|)^{-2 alpha}.
pub fn c_alpha(alpha: f64) -> f64 {
    2.0 * zeta(2.0 * alpha) - 1.0
}

/// sum_{|r| > n} (1+|r|)^{-2 alpha}
pub fn tail_weight(alpha: f64, n: i64) -> f64 {
    let head: Vec<f64> = (1..=(n + 1)).map(|k| (k as f64).powf(-2.0 * alpha)).collect();
    (2.0 * (zeta(2.0 * alpha) - pairwise_sum(&head))).max(0.0)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct WeightedNorm {
    pub window: i64,
    pub alpha: f64,
    /// largest singular value of the weighted kernel on [-N, N]
    pub value: f64,
    /// max block norm of the unweighted kernel on the window
    pub sup_kernel: f64,
    pub c_alpha: f64,
    /// C(alpha) * sup_kernel
    pub bound: f64,
    pub tail_weight: f64,
}

fn weighted_matrix(g: &GreenFunction, alpha: f64, n: i64, dim: usize) -> (Mat<fc64>, f64) {
    let blocks = g.kernel_window(-n, n);
    let size = (2 * n + 1) as usize;
    let w: Vec<f64> = (-n..=n).map(|s| (1.0 + s.abs() as f64).powf(-alpha)).collect();
    let sup = blocks.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let m = Mat::<fc64>::from_fn(size * dim, size * dim, |i, j| {
        let (bi, bj) = (i / dim, j / dim);
        let b = &blocks[bi * size + bj];
        to_faer(b[(i % dim, j % dim)] * (w[bi] * w[bj]))
    });
    (m, sup)
}

/// ||T_{-alpha} R T_{-alpha}|| on the window [-N, N].
pub fn weighted_resolvent_norm(v: &Potential, arg: EnergyArg, alpha: f64, n: i64) -> Result<WeightedNorm> {
    if !(alpha > 0.5) {
        return Err(Error::InvalidParameter(format!("alpha must exceed 1/2, got {alpha}")));
    }
    if n < 0 {
        return Err(Error::InvalidParameter(format!("window must be nonnegative, got {n}")));
    }
    let g = GreenFunction::new(v, arg, &Thresholds::default())?;
    let (m, sup) = weighted_matrix(&g, alpha, n, v.dim());
    let c = c_alpha(alpha);
    Ok(WeightedNorm {
        window: n,
        alpha,
        value: max_singular_value(m.as_ref()),
        sup_kernel: sup,
        c_alpha: c,
        bound: c * sup,
        tail_weight: tail_weight(alpha, n),
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HolderPair {
    pub e: f64,
    pub e0: f64,
    /// ||T_{-alpha}(R(E) - R(E0))T_{-alpha}|| on the window
    pub diff: f64,
    /// |r(E) - r(E0)|
    pub separation: f64,
    /// separation^{min(rho, 1)}
    pub modulus: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HolderReport {
    pub alpha: f64,
    pub rho: f64,
    pub side: Side,
    pub window: i64,
    pub pairs: Vec<HolderPair>,
    /// empirical Holder constant
    pub max_ratio: f64,
    /// least-squares slope of log diff against log separation, over pairs
    /// with separation in [1e-4, 1e-1]
    pub fitted_exponent: Option<f64>,
}

/// Holder continuity of the weighted boundary resolvent over an energy grid.
pub fn holder_diagnostic(
    v: &Potential,
    energies: &[f64],
    side: Side,
    alpha: f64,
    rho: f64,
    n: i64,
) -> Result<HolderReport> {
    if !(rho > 0.0) || !(alpha > rho + 0.5) {
        return Err(Error::InvalidParameter(format!(
            "need rho > 0 and alpha > rho + 1/2, got alpha = {alpha}, rho = {rho}"
        )));
    }
    let th = Thresholds::default();
    let mats: Vec<(f64, Complex64, Mat<fc64>)> = energies
        .par_iter()
        .map(|&e| {
            let g = GreenFunction::new(v, EnergyArg::Boundary(e, side), &th)?;
            let z = g.point.z;
            Ok((e, z, weighted_matrix(&g, alpha, n, v.dim()).0))
        })
        .collect::<Result<Vec<_>>>()?;
    let idx: Vec<(usize, usize)> = (0..mats.len())
        .flat_map(|i| ((i + 1)..mats.len()).map(move |j| (i, j)))
        .collect();
    let expo = rho.min(1.0);
    let pairs: Vec<HolderPair> = idx
        .par_iter()
        .map(|&(i, j)| {
            let (e, z, a) = (&mats[i].0, mats[i].1, &mats[i].2);
            let (e0, z0, b) = (&mats[j].0, mats[j].1, &mats[j].2);
            let diff = max_singular_value((a - b).as_ref());
            let separation = (z - z0).norm();
            let modulus = separation.powf(expo);
            let ratio = if modulus > 0.0 { diff / modulus } else { 0.0 };
            HolderPair { e: *e, e0: *e0, diff, separation, modulus, ratio }
        })
        .collect();
    let max_ratio = pairs.iter().map(|p| p.ratio).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|p| p.separation >= 1e-4 && p.separation <= 1e-1 && p.diff > 0.0)
        .map(|p| (p.separation.ln(), p.diff.ln()))
        .collect();
    Ok(HolderReport {
        alpha,
        rho,
        side,
        window: n,
        pairs,
        max_ratio,
        fitted_exponent: least_squares_slope(&pts),
    })
}

/// Slope of the least-squares line through the points, if defined.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let mx = pairwise_sum(&xs) / k;
    let my = pairwise_sum(&ys) / k;
    let sxy: Vec<f64> = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).collect();
    let sxx: Vec<f64> = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).collect();
    let den = pairwise_sum(&sxx);
    (den > 0.0).then(|| pairwise_sum(&sxy) / den)
}

/// r_+-(E) as used for Holder separations.
pub fn boundary_point(e: f64, side: Side) -> Result<Complex64> {
    inverse_zhukovsky(c64(e, 0.0), side)
}
