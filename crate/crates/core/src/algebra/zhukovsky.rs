use num_complex::Complex64;

use crate::error::{Error, Result};

/// Distance from +-2 below which an energy counts as a branch point.
pub const BRANCH_TOL: f64 = 1e-9;
/// Tolerance for deciding that |z| = 1.
pub const CIRCLE_TOL: f64 = 1e-12;

/// Which boundary value of r(E) is meant for E in (-2, 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// E + i0, z = e^{-ik}
    Plus,
    /// E - i0, z = e^{ik}
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            _ => Err(Error::Parse(format!("unknown side '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Interior,
    Plus,
    Minus,
}

/// A point z of the closed unit disk together with E = J(z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub z: Complex64,
    pub energy: Complex64,
    pub branch: Branch,
}

impl SpectralPoint {
    pub fn from_z(z: Complex64) -> Result<Self> {
        let energy = zhukovsky(z)?;
        let r = z.norm();
        if r > 1.0 + CIRCLE_TOL {
            return Err(Error::OutsideDisk(z));
        }
        let branch = if r < 1.0 - CIRCLE_TOL {
            Branch::Interior
        } else if z.im < 0.0 {
            Branch::Plus
        } else if z.im > 0.0 {
            Branch::Minus
        } else {
            return Err(Error::BandEdge(z));
        };
        Ok(SpectralPoint { z, energy, branch })
    }

    pub fn from_energy(energy: Complex64, side: Side) -> Result<Self> {
        let z = inverse_zhukovsky(energy, side)?;
        let branch = if z.norm() < 1.0 - CIRCLE_TOL {
            Branch::Interior
        } else {
            match side {
                Side::Plus => Branch::Plus,
                Side::Minus => Branch::Minus,
            }
        };
        Ok(SpectralPoint { z, energy, branch })
    }

    /// e^{-ik} on the circle for k in (-pi, pi].
    pub fn from_k(k: f64) -> Result<Self> {
        Self::from_z(Complex64::from_polar(1.0, -k))
    }

    pub fn on_circle(&self) -> bool {
        self.branch != Branch::Interior
    }
}

/// J(z) = z + 1/z.
pub fn zhukovsky(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroPoint);
    }
    Ok(z + z.inv())
}

/// Root of z^2 - E z + 1 = 0 in the closed unit disk.
///
/// Off the cut the root inside the disk is unique and `side` is ignored. On the
/// cut `Side::Plus` gives e^{-ik} and `Side::Minus` gives e^{ik}, E = 2 cos k.
pub fn inverse_zhukovsky(e: Complex64, side: Side) -> Result<Complex64> {
    if !e.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite energy {e}")));
    }
    if (e - 2.0).norm() < BRANCH_TOL || (e + 2.0).norm() < BRANCH_TOL {
        return Err(Error::BranchPoint(e));
    }
    if e.im == 0.0 && e.re.abs() < 2.0 {
        let c = e.re / 2.0;
        let s = (1.0 - c * c).sqrt();
        return Ok(Complex64::new(c, -side.sign() * s));
    }
    let mut root = (e * e - 4.0).sqrt();
    if (e.conj() * root).re < 0.0 {
        root = -root;
    }
    let big = (e + root) / 2.0;
    Ok(big.inv())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let z = inverse_zhukovsky(Complex64::new(3.0, 0.0), Side::Plus).unwrap();
        assert!((z.re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let z = inverse_zhukovsky(Complex64::new(0.0, 0.0), Side::Plus).unwrap();
        assert!((z - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let z = inverse_zhukovsky(Complex64::new(0.0, 0.0), Side::Minus).unwrap();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(matches!(
            inverse_zhukovsky(Complex64::new(2.0, 0.0), Side::Plus),
            Err(Error::BranchPoint(_))
        ));
        assert!(matches!(zhukovsky(Complex64::new(0.0, 0.0)), Err(Error::ZeroPoint)));
    }

    #[test]
    fn boundary_limit_matches_side() {
        for &e in &[-1.7, -0.3, 0.9, 1.95] {
            let zp = inverse_zhukovsky(Complex64::new(e, 0.0), Side::Plus).unwrap();
            let zm = inverse_zhukovsky(Complex64::new(e, 0.0), Side::Minus).unwrap();
            let up = inverse_zhukovsky(Complex64::new(e, 1e-11), Side::Plus).unwrap();
            let dn = inverse_zhukovsky(Complex64::new(e, -1e-11), Side::Plus).unwrap();
            assert!((zp - up).norm() < 1e-9, "{e}");
            assert!((zm - dn).norm() < 1e-9, "{e}");
        }
    }

    #[test]
    fn branch_classification() {
        let p = SpectralPoint::from_k(0.7).unwrap();
        assert_eq!(p.branch, Branch::Plus);
        assert!((p.energy.re - 2.0 * 0.7f64.cos()).abs() < 1e-15);
        assert!(matches!(SpectralPoint::from_z(Complex64::new(1.0, 0.0)), Err(Error::BandEdge(_))));
        assert!(SpectralPoint::from_z(Complex64::new(0.0, 1.5)).is_err());
    }
}
