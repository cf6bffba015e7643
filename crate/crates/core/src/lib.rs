//! Quantum particle in a two-dimensional box that dilates and deforms.
//!
//! The moving-boundary problem is mapped onto the fixed disk `r <= r0`,
//! where the particle obeys `iħ ∂t φ = H_eff(t) φ`. The crate provides:
//!
//! * [`specfun`]: Bessel functions, zeros, disk eigenmodes, quadrature;
//! * [`domain`]: boundary parametrizations and the unitary domain map;
//! * [`pantograph`]: exact solutions for uniform dilation and energy rates;
//! * [`perturbation`]: first-order transition amplitudes for the
//!   circle-to-ellipse deformation;
//! * [`oracle`]: a polar-grid Crank–Nicolson propagator for the full
//!   effective Hamiltonian plus brute-force matrix elements;
//! * [`oned`]: the one-dimensional dilating box;
//! * [`validation`]: end-to-end checks shared by the CLI and the test suite.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod error;
pub mod oned;
pub mod oracle;
pub mod pantograph;
pub mod perturbation;
pub mod specfun;
pub mod validation;

pub use domain::DomainSpec;
pub use error::{BilliardError, Result};
pub use specfun::BesselMode;
