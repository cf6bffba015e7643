//! Numerical ground truth independent of the mode expansion: a polar-grid
//! Crank–Nicolson propagator for the full fixed-domain Hamiltonian,
//! brute-force matrix elements and finite-difference energy rates.
//!
//! Snapshots of grid states are plain text: a header line `nr nθ t`
//! followed by one `re im` pair per line, ring by ring from the origin
//! outwards and by increasing θ within a ring.

mod brute;
mod diagnostics;
mod grid;
pub(crate) mod operator;
mod propagate;

pub use brute::{brute_element, brute_element_integrated, BRUTE_ANGULAR, BRUTE_RADIAL};
pub use diagnostics::{fd_energy_rate, fourth_order_derivative, grid_mean_energy, project};
pub use grid::{GridWavefunction, PolarGrid, MIN_POINTS};
pub use operator::{apply_heff, EffectiveOperator};
pub use propagate::{propagate, propagate_sampled, Propagator, MAX_SOLVE_ITERATIONS, SOLVE_TOLERANCE};
