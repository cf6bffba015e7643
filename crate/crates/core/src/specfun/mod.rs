//! Bessel functions, their zeros, disk eigenmodes and quadrature rules.

mod bessel;
mod mode;
mod quadrature;

pub use bessel::{bessel_j, bessel_j_prime, bessel_zero, ladder};
pub use mode::{basis, eigenmode_value, BesselMode, Jet, RADIAL_ORDER};
pub use quadrature::{gauss_legendre, DiskQuadrature, QuadratureRule};

pub(crate) use quadrature::legendre_reference;
