use num_complex::Complex64;

use super::grid::GridWavefunction;
use super::operator::EffectiveOperator;
use crate::domain::{BoundaryFunction, EllipticBoundary};
use crate::error::{invalid, Result};
use crate::pantograph::phi_exact;
use crate::specfun::BesselMode;
use crate::DomainSpec;

/// `⟨φ_exact(mode, t) | ψ⟩` on the grid; constant in modulus under
/// pantographic evolution.
pub fn project(psi: &GridWavefunction, mode: &BesselMode, spec: &DomainSpec, t: f64) -> Complex64 {
    let exact = GridWavefunction::sample(psi.grid.clone(), t, |r, th| phi_exact(mode, spec, r, th, t));
    exact.inner(psi)
}

/// Moving-frame energy `⟨φ|H₁ + H₃|φ⟩` of a grid state.
pub fn grid_mean_energy(psi: &GridWavefunction, boundary: &dyn BoundaryFunction, spec: &DomainSpec) -> f64 {
    let op = EffectiveOperator::new(boundary, spec.mu, spec.hbar, &psi.grid, psi.time);
    let h = op.apply_kinetic(&psi.values);
    psi.grid.inner(&psi.values, &h).re
}

/// `dE/dt` along a trajectory sampled on a uniform time grid: fourth-order
/// centered differences of the grid mean energy, one-sided at the ends.
pub fn fd_energy_rate(trajectory: &[GridWavefunction], spec: &DomainSpec) -> Result<Vec<f64>> {
    if trajectory.len() < 5 {
        return Err(invalid("trajectory", "need at least 5 snapshots"));
    }
    let boundary = EllipticBoundary::new(*spec);
    let energies: Vec<f64> = trajectory.iter().map(|p| grid_mean_energy(p, &boundary, spec)).collect();
    let times: Vec<f64> = trajectory.iter().map(|p| p.time).collect();
    fourth_order_derivative(&times, &energies)
}

/// Fourth-order finite-difference derivative of samples on a uniform grid.
pub fn fourth_order_derivative(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let n = times.len();
    if n < 5 || values.len() != n {
        return Err(invalid("times", "need at least 5 equally many times and values"));
    }
    let h = (times[n - 1] - times[0]) / (n - 1) as f64;
    if !(h > 0.0) || times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0)) {
        return Err(invalid("times", "time grid must be uniform and increasing"));
    }
    let f = values;
    let mut out = vec![0.0; n];
    for i in 2..n - 2 {
        out[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    let start = |f: &dyn Fn(usize) -> f64| {
        [
            (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h),
            (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * h),
        ]
    };
    let [d0, d1] = start(&|i| f[i]);
    out[0] = d0;
    out[1] = d1;
    // mirrored samples differentiate with the opposite sign
    let [e0, e1] = start(&|i| f[n - 1 - i]);
    out[n - 1] = -e0;
    out[n - 2] = -e1;
    Ok(out)
}
