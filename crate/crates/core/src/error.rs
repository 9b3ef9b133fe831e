use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("z = 0 is outside the domain of the Zhukovsky map")]
    ZeroPoint,

    #[error("energy {0} is a branch point (|E -+ 2| < 1e-9)")]
    BranchPoint(Complex64),

    #[error("band edge: z = {0} lies in the excluded neighbourhood of +-1")]
    BandEdge(Complex64),

    #[error("point z = {0} is not in the closed unit disk")]
    OutsideDisk(Complex64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("potential entry at n = {site} is not Hermitian (defect {defect:e})")]
    NonHermitian { site: i64, defect: f64 },

    #[error("duplicate or unsorted support index n = {0}")]
    BadIndex(i64),

    #[error("window [{lo}, {hi}] does not cover the support [{min}, {max}]")]
    WindowTooSmall { lo: i64, hi: i64, min: i64, max: i64 },

    #[error("site {0} outside the stored window")]
    OutOfWindow(i64),

    #[error("{what} is numerically singular at z = {z} (condition {cond:e})")]
    Singular { what: &'static str, z: Complex64, cond: f64 },

    #[error("energy {0} is within the eigenvalue margin of the truncated operator")]
    EigenvalueProximity(Complex64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge (estimated error {0:e})")]
    Quadrature(f64),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Singular { .. }
            | Error::EigenvalueProximity(_)
            | Error::Quadrature(_)
            | Error::Eigen(_) => 2,
            Error::CrossCheck(_) => 3,
            _ => 1,
        }
    }
}
