//! Scattering theory, resolvent kernels and dispersive decay for discrete
//! Schrodinger operators `(Hu)(n) = u(n+1) + u(n-1) + V(n)u(n)` on `l^2(Z, C^L)`
//! with finitely supported Hermitian matrix potentials.

pub mod algebra;
pub mod bessel;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod jost;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod resolvent;
pub mod scattering;

pub use error::{Error, Result};
