//! Command-line front end: argument parsing, validation, dispatch and
//! CSV/JSON output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{c64, CMatrix, Complex64, Side, SpectralPoint};
use crate::error::{Error, Result};
use crate::evolution::{Evolution, Method};
use crate::jost::{check_edge, default_window, jost_series, jost_volterra, transmutation_coeffs, Direction, DEFAULT_EDGE_EXCLUSION};
use crate::oracle::{oracle_propagator, oracle_resolvent};
use crate::potential::{format_f64, Potential};
use crate::resolvent::{
    green_boundary, holder_diagnostic, kernel_residual, prescreen_energy, EnergyArg, GreenFunction,
};
use crate::scattering::{is_generic, scattering_matrices, Thresholds};

#[derive(Parser, Debug, Clone)]
#[command(name = "jacobi-scatter", version, about = "Scattering, resolvents and time evolution for matrix Jacobi operators on Z")]
pub struct Cli {
    /// Potential JSON file (default: V = 0 with L = 1)
    #[arg(long, global = true)]
    pub potential: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; inferred from the output extension when absent
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads
    #[arg(long, global = true, env = "JACOBI_SCATTER_THREADS")]
    pub threads: Option<usize>,
    /// Tolerance for cross-checks
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum JostMethod {
    Volterra,
    Series,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvolveMethod {
    Kgrid,
    FourierBessel,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Green,
    Evolve,
    Lap,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Jost solution on a window of sites
    Jost(JostArgs),
    /// Scattering matrices on a circle grid plus the genericity verdict
    Scatter(ScatterArgs),
    /// Resolvent kernel off the spectrum
    Green(GreenArgs),
    /// Boundary value of the resolvent kernel on (-2, 2)
    GreenBoundary(GreenBoundaryArgs),
    /// Holder diagnostic for the weighted boundary resolvent
    Lap(LapArgs),
    /// Kernel of exp(-itH) P_ac
    Evolve(EvolveArgs),
    /// Dispersive decay sweep
    Decay(DecayArgs),
    /// Cross-checks against the truncated-lattice oracle
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct JostArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub z_re: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z_im: f64,
    #[arg(long, default_value = "plus")]
    pub direction: String,
    /// lo:hi (default: support hull widened by 50)
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, value_enum, default_value = "volterra")]
    pub method: JostMethod,
}

#[derive(Args, Debug, Clone)]
pub struct ScatterArgs {
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
}

#[derive(Args, Debug, Clone)]
pub struct GreenArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub energy_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub energy_im: f64,
    /// site or lo:hi
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub r: String,
}

#[derive(Args, Debug, Clone)]
pub struct GreenBoundaryArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub energy: f64,
    #[arg(long, default_value = "plus")]
    pub side: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub r: String,
}

#[derive(Args, Debug, Clone)]
pub struct LapArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub rho: f64,
    /// JSON list of energies, or {"energies": [...], "side": "plus"}
    #[arg(long)]
    pub grid_file: PathBuf,
    #[arg(long)]
    pub side: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub window: i64,
}

#[derive(Args, Debug, Clone)]
pub struct EvolveArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub r: String,
    #[arg(long, value_enum, default_value = "fourier-bessel")]
    pub method: EvolveMethod,
}

#[derive(Args, Debug, Clone)]
pub struct DecayArgs {
    #[arg(long, default_value_t = 1.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 100.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    #[arg(long, default_value_t = 256)]
    pub window: i64,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// half-width of the truncated oracle
    #[arg(long, default_value_t = 60)]
    pub window: i64,
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub potential: Potential,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub tol: f64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        if !(cli.tol > 0.0) || !cli.tol.is_finite() {
            return Err(Error::InvalidParameter(format!("--tol must be positive, got {}", cli.tol)));
        }
        if cli.threads == Some(0) {
            return Err(Error::InvalidParameter("--threads must be at least 1".into()));
        }
        match &cli.command {
            Command::Lap(a) => {
                if !(a.rho > 0.0) || !(a.alpha > a.rho + 0.5) {
                    return Err(Error::InvalidParameter(format!(
                        "need rho > 0 and alpha > rho + 1/2, got alpha = {}, rho = {}",
                        a.alpha, a.rho
                    )));
                }
                if a.window < 1 {
                    return Err(Error::InvalidParameter("--window must be at least 1".into()));
                }
            }
            Command::Evolve(a) if !(a.t >= 0.0) || !a.t.is_finite() => {
                return Err(Error::InvalidParameter(format!("--t must be finite and >= 0, got {}", a.t)));
            }
            Command::Decay(a) => {
                if !(a.tmin > 0.0) || !(a.tmax >= a.tmin) || !a.tmax.is_finite() || a.samples == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "need 0 < tmin <= tmax and samples >= 1, got tmin = {}, tmax = {}, samples = {}",
                        a.tmin, a.tmax, a.samples
                    )));
                }
            }
            Command::Scatter(a) if a.grid < 4 => {
                return Err(Error::InvalidParameter("--grid must be at least 4".into()));
            }
            Command::Verify(a) if a.window < 8 => {
                return Err(Error::InvalidParameter("--window must be at least 8".into()));
            }
            _ => {}
        }
        let potential = match &cli.potential {
            Some(p) => Potential::load(p)?,
            None => Potential::zero(1),
        };
        let format = cli.format.unwrap_or_else(|| match cli.output.as_deref().and_then(Path::extension) {
            Some(e) if e == "json" => Format::Json,
            _ => Format::Csv,
        });
        Ok(RunConfig { command: cli.command, potential, output: cli.output, format, threads: cli.threads, tol: cli.tol })
    }
}

/// Tabular output with a JSON rendering.
struct Output {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    /// replaces the row objects in JSON output when present
    json: Option<Value>,
}

enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

fn entry_columns(prefix: &str, l: usize) -> Vec<String> {
    let mut c = Vec::with_capacity(2 * l * l);
    for i in 0..l {
        for j in 0..l {
            c.push(format!("{prefix}re_{i}{j}"));
            c.push(format!("{prefix}im_{i}{j}"));
        }
    }
    c
}

fn entry_cells(m: &CMatrix) -> Vec<Cell> {
    let l = m.dim();
    let mut c = Vec::with_capacity(2 * l * l);
    for i in 0..l {
        for j in 0..l {
            c.push(Cell::Num(m[(i, j)].re));
            c.push(Cell::Num(m[(i, j)].im));
        }
    }
    c
}

fn matrix_json(m: &CMatrix) -> Value {
    let l = m.dim();
    let re: Vec<Vec<f64>> = (0..l).map(|i| (0..l).map(|j| m[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..l).map(|i| (0..l).map(|j| m[(i, j)].im).collect()).collect();
    json!({ "re": re, "im": im })
}

impl Output {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let v = self.json.clone().unwrap_or_else(|| {
                    Value::Array(
                        self.rows
                            .iter()
                            .map(|r| {
                                Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect())
                            })
                            .collect(),
                    )
                });
                let mut s = serde_json::to_string_pretty(&v).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// `a` or `lo:hi`.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("expected an integer or lo:hi, got '{s}'"));
    let (lo, hi) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            (a, a)
        }
    };
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty range {lo}:{hi}")));
    }
    Ok((lo, hi))
}

fn parse_side(s: &str) -> Result<Side> {
    s.parse()
}

fn warn_genericity(v: &Potential) {
    let g = is_generic(v, 512);
    if !g.generic {
        eprintln!(
            "warning: potential is not generic on the circle grid (min |det W| = {:e} at z = {})",
            g.min_abs_det,
            g.argmin()
        );
    } else if g.edge_resonance && !v.is_zero() {
        eprintln!(
            "warning: band-edge resonance (|det W(+1)| = {:e}, |det W(-1)| = {:e})",
            g.edge_det[0], g.edge_det[1]
        );
    }
}

fn cmd_jost(v: &Potential, a: &JostArgs, tol: f64) -> Result<Output> {
    let dir: Direction = a.direction.parse()?;
    let z = c64(a.z_re, a.z_im);
    let point = SpectralPoint::from_z(z)?;
    check_edge(&point, DEFAULT_EDGE_EXCLUSION)?;
    let window = match &a.window {
        Some(w) => parse_range(w)?,
        None => default_window(v),
    };
    let l = v.dim();
    let vol = jost_volterra(v, &point, dir, window, DEFAULT_EDGE_EXCLUSION)?;
    let values: Vec<CMatrix> = match a.method {
        JostMethod::Volterra => vol.values.values().to_vec(),
        JostMethod::Series | JostMethod::Both => {
            let table = transmutation_coeffs(v, dir, window);
            let ser: Vec<CMatrix> =
                (window.0..=window.1).map(|n| jost_series(&table, &point, n)).collect::<Result<_>>()?;
            if a.method == JostMethod::Both {
                for (n, (x, y)) in (window.0..).zip(vol.values.values().iter().zip(&ser)) {
                    let d = (x - y).norm();
                    if d > tol * (1.0 + x.norm()) {
                        return Err(Error::CrossCheck(format!(
                            "volterra and series Jost solutions differ by {d:e} at n = {n}, z = {z}"
                        )));
                    }
                }
            }
            ser
        }
    };
    let mut columns = vec!["n".to_string()];
    columns.extend(entry_columns("", l));
    let rows = (window.0..)
        .zip(&values)
        .map(|(n, m)| {
            let mut r = vec![Cell::Int(n)];
            r.extend(entry_cells(m));
            r
        })
        .collect();
    Ok(Output { columns, rows, json: None })
}

fn cmd_scatter(v: &Potential, a: &ScatterArgs) -> Result<Output> {
    let g = is_generic(v, a.grid);
    if !g.generic {
        eprintln!("warning: potential is not generic on the circle grid (min |det W| = {:e})", g.min_abs_det);
    }
    let th = Thresholds::default();
    let l = v.dim();
    let zs: Vec<Complex64> = (0..a.grid)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / a.grid as f64))
        .filter(|z| (z - 1.0).norm() >= th.edge_exclusion && (z + 1.0).norm() >= th.edge_exclusion)
        .collect();
    let data = zs
        .iter()
        .map(|&z| scattering_matrices(v, &SpectralPoint::from_z(z)?))
        .collect::<Result<Vec<_>>>()?;
    let mut columns: Vec<String> =
        ["z_re", "z_im", "nu_re", "nu_im", "det_w_re", "det_w_im"].iter().map(|s| s.to_string()).collect();
    for p in ["t_plus_", "t_minus_", "r_plus_", "r_minus_"] {
        columns.extend(entry_columns(p, l));
    }
    let rows = data
        .iter()
        .map(|d| {
            let mut r = vec![
                Cell::Num(d.point.z.re),
                Cell::Num(d.point.z.im),
                Cell::Num(d.nu.re),
                Cell::Num(d.nu.im),
                Cell::Num(d.det_w.re),
                Cell::Num(d.det_w.im),
            ];
            for m in [&d.t_plus, &d.t_minus, &d.r_plus, &d.r_minus] {
                r.extend(entry_cells(m));
            }
            r
        })
        .collect();
    let records: Vec<Value> = data
        .iter()
        .map(|d| {
            json!({
                "z": [d.point.z.re, d.point.z.im],
                "nu": [d.nu.re, d.nu.im],
                "det_w": [d.det_w.re, d.det_w.im],
                "t_plus": matrix_json(&d.t_plus),
                "t_minus": matrix_json(&d.t_minus),
                "r_plus": matrix_json(&d.r_plus),
                "r_minus": matrix_json(&d.r_minus),
            })
        })
        .collect();
    let json = json!({ "genericity": g, "records": records });
    Ok(Output { columns, rows, json: Some(json) })
}

fn kernel_rows(prefix: &[Cell], s: (i64, i64), r: (i64, i64), k: impl Fn(i64, i64) -> Result<CMatrix>) -> Result<Vec<Vec<Cell>>> {
    let mut rows = Vec::new();
    for si in s.0..=s.1 {
        for ri in r.0..=r.1 {
            let m = k(si, ri)?;
            let mut row: Vec<Cell> = prefix
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => Cell::Num(*x),
                    Cell::Int(i) => Cell::Int(*i),
                    Cell::Text(t) => Cell::Text(t.clone()),
                })
                .collect();
            row.push(Cell::Int(si));
            row.push(Cell::Int(ri));
            row.extend(entry_cells(&m));
            rows.push(row);
        }
    }
    Ok(rows)
}

fn cmd_green(v: &Potential, a: &GreenArgs) -> Result<Output> {
    let e = c64(a.energy_re, a.energy_im);
    let (s, r) = (parse_range(&a.s)?, parse_range(&a.r)?);
    if e.im == 0.0 && !v.is_zero() {
        let reach = [s.0, s.1, r.0, r.1, v.hull().0, v.hull().1].iter().map(|x| x.abs()).max().unwrap_or(0);
        prescreen_energy(v, e, reach + 200)?;
    }
    let g = GreenFunction::new(v, EnergyArg::Off(e), &Thresholds::default())?;
    let mut columns = vec!["s".to_string(), "r".to_string()];
    columns.extend(entry_columns("", v.dim()));
    Ok(Output { columns, rows: kernel_rows(&[], s, r, |x, y| Ok(g.kernel(x, y)))?, json: None })
}

fn cmd_green_boundary(v: &Potential, a: &GreenBoundaryArgs) -> Result<Output> {
    let side = parse_side(&a.side)?;
    let (s, r) = (parse_range(&a.s)?, parse_range(&a.r)?);
    let mut columns = vec!["s".to_string(), "r".to_string()];
    columns.extend(entry_columns("", v.dim()));
    Ok(Output { columns, rows: kernel_rows(&[], s, r, |x, y| green_boundary(v, a.energy, side, x, y))?, json: None })
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum GridFile {
    List(Vec<f64>),
    Object { energies: Vec<f64>, side: Option<Side> },
}

fn cmd_lap(v: &Potential, a: &LapArgs) -> Result<Output> {
    let text = std::fs::read_to_string(&a.grid_file)?;
    let (energies, file_side) = match serde_json::from_str::<GridFile>(&text)? {
        GridFile::List(e) => (e, None),
        GridFile::Object { energies, side } => (energies, side),
    };
    if energies.len() < 2 {
        return Err(Error::InvalidParameter("the energy grid needs at least two points".into()));
    }
    let side = match &a.side {
        Some(s) => parse_side(s)?,
        None => file_side.unwrap_or(Side::Plus),
    };
    let rep = holder_diagnostic(v, &energies, side, a.alpha, a.rho, a.window)?;
    let columns = ["e", "e0", "diff", "separation", "modulus", "ratio"].iter().map(|s| s.to_string()).collect();
    let rows = rep
        .pairs
        .iter()
        .map(|p| [p.e, p.e0, p.diff, p.separation, p.modulus, p.ratio].into_iter().map(Cell::Num).collect())
        .collect();
    Ok(Output { columns, rows, json: Some(serde_json::to_value(&rep)?) })
}

fn cmd_evolve(v: &Potential, a: &EvolveArgs, tol: f64) -> Result<Output> {
    warn_genericity(v);
    let ev = Evolution::new(v);
    let (s, r) = (parse_range(&a.s)?, parse_range(&a.r)?);
    let mut columns = vec!["method".to_string(), "t".to_string(), "s".to_string(), "r".to_string()];
    columns.extend(entry_columns("", v.dim()));
    let mut rows = Vec::new();
    let methods: &[(Method, &str)] = match a.method {
        EvolveMethod::Kgrid => &[(Method::Kgrid, "kgrid")],
        EvolveMethod::FourierBessel => &[(Method::FourierBessel, "fourier_bessel")],
        EvolveMethod::Both => &[(Method::Kgrid, "kgrid"), (Method::FourierBessel, "fourier_bessel")],
    };
    if a.method == EvolveMethod::Both {
        for si in s.0..=s.1 {
            for ri in r.0..=r.1 {
                ev.kernel_checked(a.t, si, ri, tol)?;
            }
        }
    }
    for &(m, name) in methods {
        rows.extend(kernel_rows(&[Cell::Text(name.into()), Cell::Num(a.t)], s, r, |x, y| ev.kernel(a.t, x, y, m))?);
    }
    Ok(Output { columns, rows, json: None })
}

fn cmd_decay(v: &Potential, a: &DecayArgs) -> Result<Output> {
    warn_genericity(v);
    let times: Vec<f64> = if a.samples == 1 || a.tmax == a.tmin {
        vec![a.tmin]
    } else {
        let ratio = a.tmax / a.tmin;
        (0..a.samples).map(|i| a.tmin * ratio.powf(i as f64 / (a.samples - 1) as f64)).collect()
    };
    if (a.window as f64) < 2.0 * a.tmax {
        eprintln!(
            "warning: window {} is below 2 * tmax = {}; the sup may miss the outgoing front at late times",
            a.window,
            2.0 * a.tmax
        );
    }
    let fit = Evolution::new(v).decay_fit(&times, a.window)?;
    let columns = ["t", "sup_norm", "bound_c_times_t_to_minus_third"].iter().map(|s| s.to_string()).collect();
    let rows = fit
        .times
        .iter()
        .zip(&fit.sup_norms)
        .map(|(&t, &m)| vec![Cell::Num(t), Cell::Num(m), Cell::Num(fit.bound(t))])
        .collect();
    Ok(Output { columns, rows, json: Some(serde_json::to_value(&fit)?) })
}

#[derive(serde::Serialize)]
struct Check {
    suite: &'static str,
    name: String,
    measured: f64,
    threshold: f64,
    pass: bool,
}

fn check(suite: &'static str, name: impl Into<String>, measured: f64, threshold: f64) -> Check {
    Check { suite, name: name.into(), measured, threshold, pass: measured <= threshold }
}

fn verify_green(v: &Potential, n: i64, out: &mut Vec<Check>) -> Result<()> {
    let q = n / 4;
    for e in [c64(3.0, 0.0), c64(-3.0, 0.0), c64(2.5, 0.5)] {
        let oracle = match oracle_resolvent(v, e, n) {
            Ok(o) => o,
            Err(Error::EigenvalueProximity(_)) => continue,
            Err(err) => return Err(err),
        };
        let g = GreenFunction::new(v, EnergyArg::Off(e), &Thresholds::default())?;
        let mut worst: f64 = 0.0;
        for s in -q..=q {
            for r in -q..=q {
                let o = oracle.block(s, r)?;
                worst = worst.max((&g.kernel(s, r) - &o).norm() / (1.0 + o.norm()));
            }
        }
        out.push(check("green", format!("oracle resolvent at E = {e}"), worst, 1e-6));
        let sites: Vec<i64> = (-q..=q).collect();
        let res = kernel_residual(v, e, |s, r| g.kernel(s, r), -q..=q, &sites);
        out.push(check("green", format!("difference equation at E = {e}"), res, 1e-10));
    }
    for e in [-1.0, 0.0, 1.0] {
        let g = GreenFunction::new(v, EnergyArg::Boundary(e, Side::Plus), &Thresholds::default())?;
        let sites: Vec<i64> = (-q..=q).collect();
        let res = kernel_residual(v, c64(e, 0.0), |s, r| g.kernel(s, r), -q..=q, &sites);
        out.push(check("green", format!("boundary difference equation at E = {e}"), res, 1e-10));
    }
    Ok(())
}

fn verify_evolve(v: &Potential, n: i64, out: &mut Vec<Check>) -> Result<()> {
    let ev = Evolution::new(v);
    let q = (n / 4).min(20);
    for (t, s, r) in [(0.5, 0, 0), (2.0, -2, 3), (5.0, 4, -1)] {
        let a = ev.kernel_kgrid(t, s, r)?;
        let b = ev.kernel_fourier_bessel(t, s, r)?;
        out.push(check("evolve", format!("kgrid vs fourier_bessel at t = {t}, s = {s}, r = {r}"), (&a - &b).norm() / (1.0 + b.norm()), 1e-8));
    }
    let t = (n as f64 / 8.0).min(5.0);
    let op = oracle_propagator(v, t, n.max(200))?;
    let mut worst: f64 = 0.0;
    for s in -q..=q {
        for r in -q..=q {
            worst = worst.max((&ev.kernel_fourier_bessel(t, s, r)? - &op.block(s, r)?).norm());
        }
    }
    out.push(check("evolve", format!("oracle propagator at t = {t}"), worst, 1e-4));
    Ok(())
}

fn verify_lap(v: &Potential, n: i64, out: &mut Vec<Check>) -> Result<()> {
    let th = Thresholds::default();
    let pts = (n / 4).max(2);
    let sites: Vec<i64> = (-pts..=pts).collect();
    let mut sym: f64 = 0.0;
    for e in [-1.0, 0.0, 1.0] {
        let plus = GreenFunction::new(v, EnergyArg::Boundary(e, Side::Plus), &th)?;
        let minus = GreenFunction::new(v, EnergyArg::Boundary(e, Side::Minus), &th)?;
        for &s in &sites {
            for &r in &sites {
                sym = sym.max((&plus.kernel(r, s) - &minus.kernel(s, r).adjoint()).norm());
            }
        }
    }
    out.push(check("lap", "boundary adjoint symmetry", sym, 1e-10));
    let energies: Vec<f64> = (0..6).map(|i| 0.3 + 0.001 * 2f64.powi(i)).collect();
    let rep = holder_diagnostic(v, &energies, Side::Plus, 2.0, 1.0, pts)?;
    let finite = if rep.max_ratio.is_finite() { 0.0 } else { 1.0 };
    out.push(check("lap", format!("finite Holder ratio (max {:e})", rep.max_ratio), finite, 0.0));
    Ok(())
}

fn cmd_verify(v: &Potential, a: &VerifyArgs) -> Result<(Output, bool)> {
    let mut checks = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::Green {
        verify_green(v, a.window, &mut checks)?;
    }
    if all || a.suite == Suite::Evolve {
        verify_evolve(v, a.window, &mut checks)?;
    }
    if all || a.suite == Suite::Lap {
        verify_lap(v, a.window, &mut checks)?;
    }
    let pass = checks.iter().all(|c| c.pass);
    let columns = ["suite", "name", "measured", "threshold", "pass"].iter().map(|s| s.to_string()).collect();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.suite.into()),
                Cell::Text(format!("\"{}\"", c.name)),
                Cell::Num(c.measured),
                Cell::Num(c.threshold),
                Cell::Text(c.pass.to_string()),
            ]
        })
        .collect();
    let json = json!({ "pass": pass, "checks": checks });
    Ok((Output { columns, rows, json: Some(json) }, pass))
}

fn write_output(cfg: &RunConfig, out: &Output) -> Result<()> {
    let text = out.render(cfg.format);
    match &cfg.output {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a validated configuration.
pub fn run(cfg: &RunConfig) -> Result<()> {
    let job = || -> Result<()> {
        let v = &cfg.potential;
        let out = match &cfg.command {
            Command::Jost(a) => cmd_jost(v, a, cfg.tol)?,
            Command::Scatter(a) => cmd_scatter(v, a)?,
            Command::Green(a) => cmd_green(v, a)?,
            Command::GreenBoundary(a) => cmd_green_boundary(v, a)?,
            Command::Lap(a) => cmd_lap(v, a)?,
            Command::Evolve(a) => cmd_evolve(v, a, cfg.tol)?,
            Command::Decay(a) => cmd_decay(v, a)?,
            Command::Verify(a) => {
                let (out, pass) = cmd_verify(v, a)?;
                write_output(cfg, &out)?;
                if !pass {
                    return Err(Error::CrossCheck("one or more verification checks failed".into()));
                }
                return Ok(());
            }
        };
        write_output(cfg, &out)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(job),
        None => job(),
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(cli).and_then(|cfg| run(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
