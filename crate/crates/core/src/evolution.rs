//! Spectral density, Stone-formula spectral measure, the kernel of
//! e^{-itH} P_ac by two quadrature routes, and dispersive decay sweeps.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::algebra::{c64, pairwise_sum_matrices, CMatrix, SpectralPoint, WienerSeries};
use crate::bessel::bessel_j_table;
use crate::error::{Error, Result};
use crate::jost::{transmutation_coeffs, Direction};
use crate::potential::Potential;
use crate::quadrature::integrate;
use crate::resolvent::{density_from_quad, least_squares_slope};
use crate::scattering::{is_generic, scattering_from_quad, GenericityReport, JostQuad, ScatteringData, Thresholds};

/// Initial and maximal circle sample counts for the Fourier coefficients of
/// T and R. The count doubles while a trimmed series still occupies more
/// than half of the available modes.
pub const FFT_SAMPLES: usize = 4096;
pub const FFT_SAMPLES_MAX: usize = 1 << 16;
/// Convergence tolerance and grid cap of the k-grid method.
pub const KGRID_TOL: f64 = 1e-12;
pub const KGRID_MAX: usize = 1 << 18;
/// Leading and trailing Fourier coefficients below this norm are dropped.
pub const COEFF_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Kgrid,
    FourierBessel,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kgrid" => Ok(Method::Kgrid),
            "fourier_bessel" | "fourier-bessel" => Ok(Method::FourierBessel),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

fn interior_thresholds() -> Thresholds {
    Thresholds { edge_exclusion: 0.0, ..Thresholds::default() }
}

fn scattering_at(v: &Potential, z: Complex64) -> Result<(JostQuad, ScatteringData)> {
    let point = SpectralPoint::from_z(z)?;
    let q = JostQuad::new(v, z)?;
    let d = scattering_from_quad(v, &point, &q, &interior_thresholds())?;
    Ok((q, d))
}

/// f_{s,r}(z) at a circle point z != +-1.
pub fn density_at(v: &Potential, z: Complex64, s: i64, r: i64) -> Result<CMatrix> {
    let (q, d) = scattering_at(v, z)?;
    Ok(density_from_quad(&q, &d, s, r))
}

/// Values of f_{s,r}(e^{-ik}) on a grid of k.
#[derive(Clone, Debug)]
pub struct SpectralDensity {
    pub s: i64,
    pub r: i64,
    pub ks: Vec<f64>,
    pub values: Vec<CMatrix>,
}

pub fn spectral_density(v: &Potential, s: i64, r: i64, ks: &[f64]) -> Result<SpectralDensity> {
    let values = ks
        .par_iter()
        .map(|&k| density_at(v, Complex64::from_polar(1.0, -k), s, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralDensity { s, r, ks: ks.to_vec(), values })
}

/// z_j = e^{i theta_j}, theta_j = 2 pi (j + 1/2) / K; the half shift keeps
/// the grid off z = +-1.
pub fn shifted_circle(k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / k as f64))
        .collect()
}

/// Fourier coefficients `sum c_m z^m` from samples on `shifted_circle(K)`.
pub fn series_from_samples(samples: &[CMatrix], dim: usize) -> WienerSeries {
    let k = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(k);
    let half = (k / 2) as i64;
    let mut coeffs = vec![CMatrix::zeros(dim); k];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..dim {
        for j in 0..dim {
            for (b, s) in buf.iter_mut().zip(samples) {
                *b = s[(i, j)];
            }
            fft.process(&mut buf);
            for (idx, m) in (-half..(k as i64 - half)).enumerate() {
                let q = m.rem_euclid(k as i64) as usize;
                let phase = Complex64::from_polar(1.0 / k as f64, -PI * m as f64 / k as f64);
                coeffs[idx][(i, j)] = buf[q] * phase;
            }
        }
    }
    WienerSeries::new(-half, dim, coeffs).trim(COEFF_THRESHOLD)
}

/// Fourier series (in z) of the scattering matrices. `r_hat` is
/// (R_-^{1/z})^* and `r_check` is (R_+^{1/z})^* as functions of z.
#[derive(Clone, Debug)]
pub struct ScatteringSeries {
    pub samples: usize,
    /// false when the coefficients had not decayed within half the modes at
    /// the largest sample count
    pub resolved: bool,
    pub t_plus: WienerSeries,
    pub t_minus: WienerSeries,
    pub r_plus: WienerSeries,
    pub r_minus: WienerSeries,
    pub r_hat: WienerSeries,
    pub r_check: WienerSeries,
}

impl ScatteringSeries {
    /// Sample count doubled from `FFT_SAMPLES` until every series fits in
    /// half the modes or `FFT_SAMPLES_MAX` is reached.
    pub fn adaptive(v: &Potential) -> Result<Self> {
        let mut k = FFT_SAMPLES;
        loop {
            let mut s = ScatteringSeries::new(v, k)?;
            if s.max_len() <= k / 2 {
                return Ok(s);
            }
            if k >= FFT_SAMPLES_MAX {
                s.resolved = false;
                return Ok(s);
            }
            k *= 2;
        }
    }

    fn max_len(&self) -> usize {
        [&self.t_plus, &self.t_minus, &self.r_plus, &self.r_minus, &self.r_hat, &self.r_check]
            .iter()
            .map(|f| f.coeffs().len())
            .max()
            .unwrap_or(0)
    }

    pub fn new(v: &Potential, samples: usize) -> Result<Self> {
        if samples < 16 || samples % 2 != 0 {
            return Err(Error::InvalidParameter(format!("sample count must be even and >= 16, got {samples}")));
        }
        let grid = shifted_circle(samples);
        let data: Vec<ScatteringData> = grid
            .par_iter()
            .map(|&z| scattering_at(v, z).map(|x| x.1))
            .collect::<Result<Vec<_>>>()?;
        let l = v.dim();
        let pick = |f: &dyn Fn(&ScatteringData) -> CMatrix| -> Vec<CMatrix> { data.iter().map(f).collect() };
        // conj(z_j) = z_{K-1-j} on the shifted grid
        let mirrored = |f: &dyn Fn(&ScatteringData) -> CMatrix| -> Vec<CMatrix> {
            (0..samples).map(|j| f(&data[samples - 1 - j]).adjoint()).collect()
        };
        Ok(ScatteringSeries {
            samples,
            resolved: true,
            t_plus: series_from_samples(&pick(&|d| d.t_plus.clone()), l),
            t_minus: series_from_samples(&pick(&|d| d.t_minus.clone()), l),
            r_plus: series_from_samples(&pick(&|d| d.r_plus.clone()), l),
            r_minus: series_from_samples(&pick(&|d| d.r_minus.clone()), l),
            r_hat: series_from_samples(&mirrored(&|d| d.r_minus.clone()), l),
            r_check: series_from_samples(&mirrored(&|d| d.r_plus.clone()), l),
        })
    }
}

/// (-i)^p J_p(2t) for p = 0..=pmax.
pub fn beta_table(t: f64, pmax: usize) -> Vec<Complex64> {
    let j = bessel_j_table(2.0 * t, pmax);
    let phases = [c64(1.0, 0.0), c64(0.0, -1.0), c64(-1.0, 0.0), c64(0.0, 1.0)];
    j.iter().enumerate().map(|(p, &x)| phases[p % 4] * x).collect()
}

/// (1/2pi) int e^{-2it cos k} e^{-iqk} F(e^{-ik}) dk = sum_m F_m beta(q + m).
fn apply_beta(f: &WienerSeries, beta: &[Complex64], q: i64) -> CMatrix {
    let mut acc = CMatrix::zeros(f.dim());
    for (i, c) in f.coeffs().iter().enumerate() {
        let p = (q + f.m_min() + i as i64).unsigned_abs() as usize;
        acc.axpy(beta[p], c);
    }
    acc
}

fn max_index(f: &WienerSeries) -> usize {
    f.m_min().unsigned_abs().max(f.m_max().unsigned_abs()) as usize
}

fn replay(e: &Error) -> Error {
    match e {
        Error::Singular { what, z, cond } => Error::Singular { what, z: *z, cond: *cond },
        Error::BandEdge(z) => Error::BandEdge(*z),
        Error::Quadrature(x) => Error::Quadrature(*x),
        other => Error::InvalidParameter(other.to_string()),
    }
}

/// Time-evolution machinery for one potential.
pub struct Evolution {
    v: Potential,
    hull: (i64, i64),
    series: OnceLock<Result<ScatteringSeries>>,
    genericity: OnceLock<GenericityReport>,
}

impl Evolution {
    pub fn new(v: &Potential) -> Self {
        Evolution { v: v.clone(), hull: v.hull(), series: OnceLock::new(), genericity: OnceLock::new() }
    }

    pub fn potential(&self) -> &Potential {
        &self.v
    }

    /// Genericity evidence on a 512-point circle grid.
    pub fn genericity(&self) -> &GenericityReport {
        self.genericity.get_or_init(|| is_generic(&self.v, 512))
    }

    pub fn series(&self) -> Result<&ScatteringSeries> {
        self.series
            .get_or_init(|| ScatteringSeries::adaptive(&self.v))
            .as_ref()
            .map_err(replay)
    }

    /// ut_+(s) (plus) or ut_-^{(1/z)}(s) (minus) as a polynomial in z.
    fn poly(&self, dir: Direction, n: i64) -> WienerSeries {
        let t = transmutation_coeffs(&self.v, dir, (n, n));
        WienerSeries::new(0, self.v.dim(), t.at(n).expect("window is [n, n]").to_vec())
    }

    /// The same polynomial adjointed on the circle with z -> 1/z, i.e.
    /// coefficients B_m(n)^* of z^m.
    fn poly_conj(&self, dir: Direction, n: i64) -> WienerSeries {
        let t = transmutation_coeffs(&self.v, dir, (n, n));
        let c = t.at(n).expect("window is [n, n]").iter().map(|b| b.adjoint()).collect();
        WienerSeries::new(0, self.v.dim(), c)
    }

    /// f_{s,r} as a Wiener series: transmutation polynomials times the
    /// FFT series of T_+-.
    pub fn density_series(&self, s: i64, r: i64) -> Result<WienerSeries> {
        let ser = self.series()?;
        if s >= r {
            self.poly(Direction::Plus, s).product(&ser.t_plus)?.product(&self.poly_conj(Direction::Minus, r))
        } else {
            self.poly(Direction::Minus, s).product(&ser.t_minus)?.product(&self.poly_conj(Direction::Plus, r))
        }
    }

    pub fn kernel(&self, t: f64, s: i64, r: i64, method: Method) -> Result<CMatrix> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
        }
        match method {
            Method::Kgrid => self.kernel_kgrid(t, s, r),
            Method::FourierBessel => self.kernel_fourier_bessel(t, s, r),
        }
    }

    /// Number of trapezoid nodes used by the k-grid method.
    pub fn kgrid_size(&self, t: f64, s: i64, r: i64) -> usize {
        let (a, b) = self.hull;
        let freq = (s - r).abs() + 2 * s.abs().max(r.abs()) + 2 * (b - a) + 2 * a.abs().max(b.abs());
        (64.0 + 16.0 * t).ceil() as usize + 2 * freq as usize + 64
    }

    /// Periodic trapezoid rule on a shifted uniform k-grid with f_{s,r}
    /// evaluated pointwise from Jost solutions. The grid starts at
    /// `kgrid_size` and doubles until successive values agree to
    /// `KGRID_TOL (1 + ||K||)`.
    pub fn kernel_kgrid(&self, t: f64, s: i64, r: i64) -> Result<CMatrix> {
        let mut k = self.kgrid_size(t, s, r);
        let mut prev = self.trapezoid(t, s, r, k)?;
        loop {
            k *= 2;
            let cur = self.trapezoid(t, s, r, k)?;
            let diff = (&cur - &prev).norm();
            if diff <= KGRID_TOL * (1.0 + cur.norm()) {
                return Ok(cur);
            }
            if k >= KGRID_MAX {
                return Err(Error::Quadrature(diff));
            }
            prev = cur;
        }
    }

    fn trapezoid(&self, t: f64, s: i64, r: i64, k: usize) -> Result<CMatrix> {
        let n = (s - r).abs() as f64;
        let terms = (0..k)
            .into_par_iter()
            .map(|j| {
                let kk = 2.0 * PI * (j as f64 + 0.5) / k as f64;
                let z = Complex64::from_polar(1.0, -kk);
                let phase = Complex64::from_polar(1.0 / k as f64, -2.0 * t * kk.cos() - n * kk);
                Ok(density_at(&self.v, z, s, r)?.scale(phase))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(pairwise_sum_matrices(&terms, self.v.dim()))
    }

    /// sum_m a_m (-i)^{|m+n|} J_{|m+n|}(2t) with a_m the coefficients of f_{s,r}.
    pub fn kernel_fourier_bessel(&self, t: f64, s: i64, r: i64) -> Result<CMatrix> {
        let f = self.density_series(s, r)?;
        let n = (s - r).abs();
        let beta = beta_table(t, n as usize + max_index(&f) + 1);
        let terms: Vec<CMatrix> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(beta[(f.m_min() + i as i64 + n).unsigned_abs() as usize]))
            .collect();
        Ok(pairwise_sum_matrices(&terms, self.v.dim()))
    }

    /// Runs both methods; disagreement beyond `tol (1 + ||K||)` is a
    /// cross-check failure.
    pub fn kernel_checked(&self, t: f64, s: i64, r: i64, tol: f64) -> Result<(CMatrix, CMatrix, f64)> {
        let a = self.kernel_kgrid(t, s, r)?;
        let b = self.kernel_fourier_bessel(t, s, r)?;
        let d = (&a - &b).norm();
        if d > tol * (1.0 + a.norm().max(b.norm())) {
            return Err(Error::CrossCheck(format!(
                "kgrid and fourier_bessel differ by {d:e} at t = {t}, s = {s}, r = {r}"
            )));
        }
        Ok((a, b, d))
    }

    /// Sup over the window of the kernel norm at each time, with the fitted
    /// decay exponent and constant.
    pub fn decay_fit(&self, times: &[f64], window: i64) -> Result<DecayFit> {
        if times.is_empty() || times.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter("times must be positive and finite".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("times must be strictly increasing".into()));
        }
        let (a, b) = self.hull;
        if window < a.abs().max(b.abs()) + 1 {
            return Err(Error::InvalidParameter(format!(
                "window {window} must extend past the support [{a}, {b}]"
            )));
        }
        let sweep = DecaySweep::new(self, window)?;
        let mut sup_norms = Vec::with_capacity(times.len());
        let mut argmax = Vec::with_capacity(times.len());
        for &t in times {
            let (m, at) = sweep.sup_at(t);
            sup_norms.push(m);
            argmax.push(at);
        }
        let t_max = *times.last().expect("nonempty");
        let pts: Vec<(f64, f64)> = times
            .iter()
            .zip(&sup_norms)
            .filter(|(t, m)| **t >= t_max / 10.0 && **m > 0.0)
            .map(|(t, m)| (t.ln(), m.ln()))
            .collect();
        let c_fit = times
            .iter()
            .zip(&sup_norms)
            .map(|(t, m)| m * (1.0 + t).powf(1.0 / 3.0))
            .fold(0.0, f64::max);
        let vdc = times
            .iter()
            .zip(&sup_norms)
            .map(|(t, m)| m * t.powf(1.0 / 3.0) / sweep.wiener_sup)
            .fold(0.0, f64::max);
        let g = self.genericity();
        Ok(DecayFit {
            times: times.to_vec(),
            sup_norms,
            argmax,
            slope: least_squares_slope(&pts),
            c_fit,
            window,
            wiener_sup: sweep.wiener_sup,
            vdc_constant: vdc,
            generic: g.generic,
            edge_resonance: g.edge_resonance,
            fft_samples: self.series()?.samples,
            series_resolved: self.series()?.resolved,
        })
    }
}

/// Result of a dispersive-decay sweep.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DecayFit {
    pub times: Vec<f64>,
    /// sup over |s|, |r| <= window, |s - r| <= ceil(2.5 t) of the kernel norm
    pub sup_norms: Vec<f64>,
    pub argmax: Vec<(i64, i64)>,
    /// log-log slope over the last decade of times
    pub slope: Option<f64>,
    /// max_t sup_norm (1 + t)^{1/3}
    pub c_fit: f64,
    pub window: i64,
    /// largest Wiener norm among the densities entering the sweep
    pub wiener_sup: f64,
    /// max_t sup_norm t^{1/3} / wiener_sup
    pub vdc_constant: f64,
    pub generic: bool,
    pub edge_resonance: bool,
    /// circle samples behind the scattering series, and whether they
    /// resolved its coefficient tail
    pub fft_samples: usize,
    pub series_resolved: bool,
}

impl DecayFit {
    /// c_fit (1+t)^{-1/3}
    pub fn bound(&self, t: f64) -> f64 {
        self.c_fit * (1.0 + t).powf(-1.0 / 3.0)
    }
}

/// Entries of K[F](q) = sum_m F_m beta(q + m) for q in [q_lo, q_hi], stored
/// flat with L^2 entries per q.
struct Table {
    q_lo: i64,
    l2: usize,
    data: Vec<Complex64>,
}

impl Table {
    fn get(&self, q: i64) -> &[Complex64] {
        let i = (q - self.q_lo) as usize * self.l2;
        &self.data[i..i + self.l2]
    }
}

/// Correlation of the coefficients of `f` with beta (indexed by |p|) over
/// q in [q_lo, q_hi], by FFT convolution.
fn correlate(f: &WienerSeries, beta: &[Complex64], q_lo: i64, q_hi: i64) -> Table {
    let l = f.dim();
    let la = f.coeffs().len();
    let nq = (q_hi - q_lo + 1) as usize;
    let lg = nq + la - 1;
    let p0 = q_lo + f.m_min();
    let size = (la + lg - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let zero = Complex64::new(0.0, 0.0);
    let mut g = vec![zero; size];
    for (p, x) in g.iter_mut().take(lg).enumerate() {
        *x = beta[(p0 + p as i64).unsigned_abs() as usize];
    }
    fwd.process(&mut g);
    let mut data = vec![zero; nq * l * l];
    let mut buf = vec![zero; size];
    let scale = 1.0 / size as f64;
    for i in 0..l {
        for j in 0..l {
            buf.iter_mut().for_each(|x| *x = zero);
            for (k, c) in f.coeffs().iter().enumerate() {
                buf[la - 1 - k] = c[(i, j)];
            }
            fwd.process(&mut buf);
            for (x, y) in buf.iter_mut().zip(&g) {
                *x *= y;
            }
            inv.process(&mut buf);
            for q in 0..nq {
                data[q * l * l + i * l + j] = buf[q + la - 1] * scale;
            }
        }
    }
    Table { q_lo, l2: l * l, data }
}

/// Operator norm of `shift I - m` (or of `m` when `shift` is None) for a
/// flat row-major block.
fn block_norm(m: &[Complex64], l: usize, shift: Option<Complex64>) -> f64 {
    let sign = if shift.is_some() { -1.0 } else { 1.0 };
    let s = shift.unwrap_or_default();
    match l {
        1 => (s + m[0] * sign).norm(),
        2 => {
            let (a, b, c, d) = (s + m[0] * sign, m[1] * sign, m[2] * sign, s + m[3] * sign);
            let f2 = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
            let det = (a * d - b * c).norm();
            ((f2 + (f2 * f2 - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
        }
        _ => CMatrix::from_fn(l, |i, j| {
            let e = m[i * l + j] * sign;
            if i == j { s + e } else { e }
        })
        .norm(),
    }
}

/// Precomputed densities for the exterior decomposition of the window.
///
/// Away from the support hull [a, b] the density reduces to a scattering
/// matrix, possibly shifted by z^{+-2s} or z^{+-2r} and added to the
/// identity, so whole families of (s, r) share one Fourier series. Sites
/// strictly inside (a, b) get their own series.
struct DecaySweep {
    dim: usize,
    window: i64,
    hull: (i64, i64),
    /// T_+, T_-, R_+, R_-, R^, R-check
    exterior: [WienerSeries; 6],
    /// per core site c: (P_c T_+, P^-_c T_-, T_+ Q^-_c, T_- Q^+_c)
    core: Vec<[WienerSeries; 4]>,
    /// f_{s,r} for both sites in the core, row-major
    core_pairs: Vec<WienerSeries>,
    wiener_sup: f64,
}

impl DecaySweep {
    fn new(ev: &Evolution, window: i64) -> Result<Self> {
        let ser = ev.series()?;
        let (a, b) = ev.hull;
        let core_sites: Vec<i64> = ((a + 1)..b).collect();
        let core = core_sites
            .par_iter()
            .map(|&c| {
                Ok([
                    ev.poly(Direction::Plus, c).product(&ser.t_plus)?,
                    ev.poly(Direction::Minus, c).product(&ser.t_minus)?,
                    ser.t_plus.product(&ev.poly_conj(Direction::Minus, c))?,
                    ser.t_minus.product(&ev.poly_conj(Direction::Plus, c))?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(i64, i64)> = core_sites
            .iter()
            .flat_map(|&s| core_sites.iter().map(move |&r| (s, r)))
            .collect();
        let core_pairs = pairs
            .par_iter()
            .map(|&(s, r)| ev.density_series(s, r))
            .collect::<Result<Vec<_>>>()?;
        let exterior = [
            ser.t_plus.clone(),
            ser.t_minus.clone(),
            ser.r_plus.clone(),
            ser.r_minus.clone(),
            ser.r_hat.clone(),
            ser.r_check.clone(),
        ];
        let mut wiener_sup = exterior[0].norm().max(exterior[1].norm());
        for r in &exterior[2..] {
            wiener_sup = wiener_sup.max(1.0 + r.norm());
        }
        for f in core.iter().flatten().chain(&core_pairs) {
            wiener_sup = wiener_sup.max(f.norm());
        }
        Ok(DecaySweep { dim: ev.v.dim(), window, hull: (a, b), exterior, core, core_pairs, wiener_sup })
    }

    fn sup_at(&self, t: f64) -> (f64, (i64, i64)) {
        let w = self.window;
        let (a, b) = self.hull;
        let l = self.dim;
        let span = self
            .exterior
            .iter()
            .chain(self.core.iter().flatten())
            .chain(&self.core_pairs)
            .map(max_index)
            .max()
            .unwrap_or(0);
        let beta = beta_table(t, (2 * w) as usize + span + 2);
        let d = (2.5 * t).ceil() as i64;
        let nmax = d.min(2 * w);

        let ext: Vec<Table> = self
            .exterior
            .par_iter()
            .enumerate()
            .map(|(i, f)| if i < 2 { correlate(f, &beta, 0, nmax) } else { correlate(f, &beta, -2 * w, 2 * w) })
            .collect();
        let (ktp, ktm, krp, krm, khat, kchk) = (&ext[0], &ext[1], &ext[2], &ext[3], &ext[4], &ext[5]);
        let core: Vec<Vec<Table>> = self
            .core
            .par_iter()
            .map(|fs| fs.iter().map(|f| correlate(f, &beta, 0, nmax)).collect())
            .collect();
        let pair_vals: Vec<CMatrix> = self
            .core_pairs
            .iter()
            .zip(((a + 1)..b).flat_map(|s| ((a + 1)..b).map(move |r| (s - r).abs())))
            .map(|(f, n)| apply_beta(f, &beta, n))
            .collect();
        let width = (b - a - 1).max(0);
        let is_core = |x: i64| x > a && x < b;

        let rows: Vec<(f64, (i64, i64))> = (-w..=w)
            .into_par_iter()
            .map(|s| {
                let mut best = (f64::NEG_INFINITY, (s, s));
                let mut flat = vec![Complex64::new(0.0, 0.0); l * l];
                for r in (s - d).max(-w)..=(s + d).min(w) {
                    let n = (s - r).abs();
                    let free = beta[n as usize];
                    let (m, shift): (&[Complex64], Option<Complex64>) = if is_core(s) && is_core(r) {
                        let p = &pair_vals[((s - a - 1) * width + (r - a - 1)) as usize];
                        for i in 0..l {
                            for j in 0..l {
                                flat[i * l + j] = p[(i, j)];
                            }
                        }
                        (&flat, None)
                    } else if is_core(s) {
                        let c = &core[(s - a - 1) as usize];
                        (if s >= r { c[0].get(n) } else { c[1].get(n) }, None)
                    } else if is_core(r) {
                        let c = &core[(r - a - 1) as usize];
                        (if s >= r { c[2].get(n) } else { c[3].get(n) }, None)
                    } else if s >= r {
                        if s >= b && r <= a {
                            (ktp.get(n), None)
                        } else if r >= b {
                            (khat.get(s + r), Some(free))
                        } else {
                            (krp.get(-s - r), Some(free))
                        }
                    } else if s <= a && r >= b {
                        (ktm.get(n), None)
                    } else if s >= b {
                        (krm.get(r + s), Some(free))
                    } else {
                        (kchk.get(-r - s), Some(free))
                    };
                    let nv = block_norm(m, l, shift);
                    if nv > best.0 {
                        best = (nv, (s, r));
                    }
                }
                best
            })
            .collect();
        rows.into_iter().fold((0.0, (0, 0)), |acc, x| if x.0 > acc.0 { x } else { acc })
    }
}

/// Evolution kernel (1/2pi) int e^{-2it cos k - i|s-r|k} f_{s,r}(e^{-ik}) dk.
pub fn evolution_kernel(v: &Potential, t: f64, s: i64, r: i64, method: Method) -> Result<CMatrix> {
    Evolution::new(v).kernel(t, s, r, method)
}

/// Dispersive-decay sweep over `times` on the window |s|, |r| <= window.
pub fn dispersive_decay_fit(v: &Potential, times: &[f64], window: i64) -> Result<DecayFit> {
    Evolution::new(v).decay_fit(times, window)
}

/// Integrand of the Stone formula in k: z^{|n|} f(z) + z^{-|n|} f(1/z), z = e^{-ik}.
pub fn stone_integrand(v: &Potential, k: f64, s: i64, r: i64) -> Result<CMatrix> {
    let z = Complex64::from_polar(1.0, -k);
    let n = (s - r).unsigned_abs() as i32;
    let (q, d) = scattering_at(v, z)?;
    let (qi, di) = scattering_at(v, z.inv())?;
    Ok(density_from_quad(&q, &d, s, r).scale(z.powi(n)) + density_from_quad(&qi, &di, s, r).scale(z.powi(-n)))
}

/// Spectral measure E_{(a,b)} block (s, r) from the Stone formula, written
/// in k with E = 2 cos k: (1/2pi) int_{k_b}^{k_a} stone_integrand dk.
pub fn spectral_measure(v: &Potential, a: f64, b: f64, s: i64, r: i64) -> Result<CMatrix> {
    spectral_measure_with_tol(v, a, b, s, r, 1e-10)
}

pub fn spectral_measure_with_tol(v: &Potential, a: f64, b: f64, s: i64, r: i64, tol: f64) -> Result<CMatrix> {
    if !(a > -2.0 && b < 2.0 && a < b) {
        return Err(Error::InvalidParameter(format!("need -2 < a < b < 2, got ({a}, {b})")));
    }
    let (ka, kb) = ((a / 2.0).acos(), (b / 2.0).acos());
    let (m, _) = integrate(|k| stone_integrand(v, k, s, r), kb, ka, tol * 2.0 * PI, 4000)?;
    Ok(m.scale(c64(1.0 / (2.0 * PI), 0.0)))
}
