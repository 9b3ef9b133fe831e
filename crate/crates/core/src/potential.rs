//! Finitely supported Hermitian matrix potentials.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::algebra::{pairwise_sum, CMatrix, Complex64};
use crate::error::{Error, Result};

/// Hermitian potential V: Z -> C^{L x L} with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    dim: usize,
    sites: Vec<i64>,
    values: Vec<CMatrix>,
}

/// The weighted l^1 norms `sum (1+|n|)^rho ||V(n)||` for rho = 0, 1 and a
/// caller-supplied rho, plus the sup norm.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DecayNorms {
    pub l1: f64,
    pub l1_weighted_1: f64,
    pub rho: f64,
    pub l1_weighted_rho: f64,
    pub sup: f64,
}

impl Potential {
    /// Validates dimensions, strict ordering of the sites and Hermiticity up
    /// to `1e-12 (1 + ||V(n)||)`.
    pub fn new(dim: usize, entries: Vec<(i64, CMatrix)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension L must be positive".into()));
        }
        let mut sites = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (n, m) in entries {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            if let Some(&last) = sites.last() {
                if n <= last {
                    return Err(Error::BadIndex(n));
                }
            }
            let defect = m.hermitian_defect();
            if defect > 1e-12 * (1.0 + m.norm()) {
                return Err(Error::NonHermitian { site: n, defect });
            }
            sites.push(n);
            values.push(m);
        }
        Ok(Potential { dim, sites, values })
    }

    pub fn zero(dim: usize) -> Self {
        Potential { dim, sites: vec![], values: vec![] }
    }

    pub fn single_site(n: i64, m: CMatrix) -> Result<Self> {
        Self::new(m.dim(), vec![(n, m)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sites(&self) -> &[i64] {
        &self.sites
    }

    pub fn values(&self) -> &[CMatrix] {
        &self.values
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &CMatrix)> {
        self.sites.iter().copied().zip(self.values.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn at(&self, n: i64) -> Option<&CMatrix> {
        self.sites.binary_search(&n).ok().map(|i| &self.values[i])
    }

    /// V(n), zero off the support.
    pub fn value(&self, n: i64) -> CMatrix {
        self.at(n).cloned().unwrap_or_else(|| CMatrix::zeros(self.dim))
    }

    pub fn min_site(&self) -> Option<i64> {
        self.sites.first().copied()
    }

    pub fn max_site(&self) -> Option<i64> {
        self.sites.last().copied()
    }

    /// Smallest interval containing the support; `(0, 0)` for V = 0.
    pub fn hull(&self) -> (i64, i64) {
        (self.min_site().unwrap_or(0), self.max_site().unwrap_or(0))
    }

    /// `sum (1+|n|)^rho ||V(n)||`
    pub fn weighted_norm(&self, rho: f64) -> f64 {
        let terms: Vec<f64> = self
            .entries()
            .map(|(n, v)| (1.0 + n.abs() as f64).powf(rho) * v.norm())
            .collect();
        pairwise_sum(&terms)
    }

    pub fn decay_norms(&self, rho: f64) -> DecayNorms {
        DecayNorms {
            l1: self.weighted_norm(0.0),
            l1_weighted_1: self.weighted_norm(1.0),
            rho,
            l1_weighted_rho: self.weighted_norm(rho),
            sup: self.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Restriction to `[-n, n]` and the weighted norm of what was cut off.
    pub fn truncated(&self, n: i64, rho: f64) -> (Potential, f64) {
        let mut kept = Vec::new();
        let mut tail = Vec::new();
        for (s, v) in self.entries() {
            if s.abs() <= n {
                kept.push((s, v.clone()));
            } else {
                tail.push((1.0 + s.abs() as f64).powf(rho) * v.norm());
            }
        }
        let (sites, values) = kept.into_iter().unzip();
        (Potential { dim: self.dim, sites, values }, pairwise_sum(&tail))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: PotentialFile = serde_json::from_str(s)?;
        let mut entries = file
            .entries
            .into_iter()
            .map(|e| Ok((e.n, CMatrix::from_parts(&e.re, &e.im)?)))
            .collect::<Result<Vec<_>>>()?;
        entries.sort_by_key(|(n, _)| *n);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::BadIndex(w[0].0));
            }
        }
        Potential::new(file.dim, entries)
    }

    /// JSON text with every float written to 17 significant digits.
    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{{\n  \"L\": {},\n  \"entries\": [", self.dim);
        for (k, (n, v)) in self.entries().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "\n    {{ \"n\": {n}, \"re\": ");
            write_rows(&mut out, v, |c| c.re);
            out.push_str(", \"im\": ");
            write_rows(&mut out, v, |c| c.im);
            out.push_str(" }");
        }
        if !self.sites.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}

fn write_rows(out: &mut String, v: &CMatrix, part: impl Fn(Complex64) -> f64) {
    let l = v.dim();
    out.push('[');
    for i in 0..l {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for j in 0..l {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&format_f64(part(v[(i, j)])));
        }
        out.push(']');
    }
    out.push(']');
}

/// Float to 17 significant digits in a JSON/CSV-safe form.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

#[derive(Deserialize)]
struct PotentialFile {
    #[serde(rename = "L")]
    dim: usize,
    entries: Vec<EntryFile>,
}

#[derive(Deserialize)]
struct EntryFile {
    n: i64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::c64;

    fn herm2(a: f64, b: Complex64, d: f64) -> CMatrix {
        CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => c64(a, 0.0),
            (0, 1) => b,
            (1, 0) => b.conj(),
            _ => c64(d, 0.0),
        })
    }

    #[test]
    fn rejects_bad_input() {
        let bad = CMatrix::from_fn(2, |i, j| c64((i * 2 + j) as f64, 0.0));
        assert!(matches!(Potential::new(2, vec![(0, bad)]), Err(Error::NonHermitian { .. })));
        let v = herm2(1.0, c64(0.0, 1.0), 2.0);
        assert!(matches!(
            Potential::new(2, vec![(1, v.clone()), (1, v.clone())]),
            Err(Error::BadIndex(1))
        ));
        assert!(matches!(
            Potential::new(3, vec![(0, v)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let v = Potential::new(
            2,
            vec![
                (-3, herm2(0.1, c64(1.0 / 3.0, -2.0 / 7.0), -0.7)),
                (2, herm2(1e-300, c64(-0.0, 5e-17), 123.456)),
            ],
        )
        .unwrap();
        let text = v.to_json_string();
        let back = Potential::from_json_str(&text).unwrap();
        assert_eq!(v, back);
        assert_eq!(text, back.to_json_string());
        assert_eq!(Potential::from_json_str(&Potential::zero(3).to_json_string()).unwrap(), Potential::zero(3));
    }

    #[test]
    fn norms_and_truncation() {
        let v = Potential::new(1, vec![(-2, CMatrix::scalar(1, c64(2.0, 0.0))), (5, CMatrix::scalar(1, c64(-1.0, 0.0)))]).unwrap();
        assert_eq!(v.weighted_norm(0.0), 3.0);
        assert_eq!(v.weighted_norm(1.0), 3.0 * 2.0 + 6.0);
        let (t, tail) = v.truncated(3, 1.0);
        assert_eq!(t.sites(), &[-2]);
        assert_eq!(tail, 6.0);
        assert_eq!(v.hull(), (-2, 5));
    }
}
