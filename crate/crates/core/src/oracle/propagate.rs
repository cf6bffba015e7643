use num_complex::Complex64;

use super::grid::{GridWavefunction, PolarGrid};
use super::operator::{BlockSolver, EffectiveOperator, Spectral};
use crate::domain::BoundaryFunction;
use crate::error::{invalid, BilliardError, Result};

/// Relative residual at which the deformed-step iteration stops.
pub const SOLVE_TOLERANCE: f64 = 1e-12;

/// Iteration cap of the deformed-step solve.
pub const MAX_SOLVE_ITERATIONS: usize = 200;

/// Crank–Nicolson stepper for `iħ ∂t φ = H_eff(t) φ` with the operator
/// frozen at the midpoint of each step.
///
/// Pantographic steps are solved exactly per angular wavenumber. Deformed
/// steps use a preconditioned fixed-point iteration whose preconditioner is
/// the pantographic stepper with θ-averaged coefficients.
pub struct Propagator<'a> {
    boundary: &'a dyn BoundaryFunction,
    mu: f64,
    hbar: f64,
    grid: PolarGrid,
    spectral: Spectral,
    /// Total fixed-point iterations spent so far.
    pub iterations: usize,
}

impl<'a> Propagator<'a> {
    pub fn new(boundary: &'a dyn BoundaryFunction, mu: f64, hbar: f64, grid: &PolarGrid) -> Self {
        Self { boundary, mu, hbar, grid: grid.clone(), spectral: Spectral::new(grid.ntheta), iterations: 0 }
    }

    pub fn operator(&self, t: f64) -> EffectiveOperator<'a> {
        EffectiveOperator::with_spectral(self.boundary, self.mu, self.hbar, &self.grid, t, self.spectral.clone())
    }

    /// One step of length `dt` from `psi.time`.
    pub fn step(&mut self, psi: &mut GridWavefunction, dt: f64) -> Result<()> {
        let t_mid = psi.time + 0.5 * dt;
        let op = self.operator(t_mid);
        let tau = dt / (2.0 * self.hbar);
        let it = Complex64::new(0.0, tau);
        let hu = op.apply(&psi.values);
        let rhs: Vec<Complex64> = psi.values.iter().zip(&hu).map(|(u, h)| u - it * h).collect();
        let (inv_r2, rate) = op.averaged_coefficients();
        let solver = BlockSolver::new(&self.grid, op.spectral().clone(), self.mu, self.hbar, inv_r2, rate, tau);
        let mut x = solver.solve(&rhs);
        if op.is_deformed() {
            let scale = self.grid.plain_inner(&rhs, &rhs).re.sqrt();
            let mut residual = f64::INFINITY;
            let mut done = false;
            for _ in 0..MAX_SOLVE_ITERATIONS {
                self.iterations += 1;
                let hx = op.apply(&x);
                let r: Vec<Complex64> =
                    rhs.iter().zip(&x).zip(&hx).map(|((b, x), h)| b - x - it * h).collect();
                residual = self.grid.plain_inner(&r, &r).re.sqrt() / scale.max(f64::MIN_POSITIVE);
                if residual <= SOLVE_TOLERANCE {
                    done = true;
                    break;
                }
                if !residual.is_finite() {
                    break;
                }
                let correction = solver.solve(&r);
                for (xi, c) in x.iter_mut().zip(&correction) {
                    *xi += c;
                }
            }
            if !done {
                return Err(BilliardError::SolveFailed { t: t_mid, residual, iterations: MAX_SOLVE_ITERATIONS });
            }
        }
        psi.values = x;
        psi.enforce_dirichlet();
        psi.time += dt;
        Ok(())
    }

    /// Steps of length at most `dt` until `t1`; the last step lands on `t1`.
    pub fn advance_to(&mut self, psi: &mut GridWavefunction, t1: f64, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(invalid("dt", "time step must be positive"));
        }
        let span = t1 - psi.time;
        if span < 0.0 {
            return Err(invalid("t1", "cannot propagate backwards"));
        }
        let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
        let start = psi.time;
        for i in 0..steps {
            let target = if i + 1 == steps { t1 } else { start + (i + 1) as f64 * span / steps as f64 };
            self.step(psi, target - psi.time)?;
            psi.time = target;
        }
        Ok(())
    }

    /// States at every time of the increasing list `times`.
    pub fn sample(&mut self, psi0: &GridWavefunction, times: &[f64], dt: f64) -> Result<Vec<GridWavefunction>> {
        let mut psi = psi0.clone();
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            self.advance_to(&mut psi, t, dt)?;
            out.push(psi.clone());
        }
        Ok(out)
    }
}

/// Evolves `psi0` from its own time to `t1` with steps of at most `dt`.
pub fn propagate(
    boundary: &dyn BoundaryFunction,
    mu: f64,
    hbar: f64,
    psi0: &GridWavefunction,
    t1: f64,
    dt: f64,
) -> Result<GridWavefunction> {
    let mut prop = Propagator::new(boundary, mu, hbar, &psi0.grid);
    let mut psi = psi0.clone();
    prop.advance_to(&mut psi, t1, dt)?;
    Ok(psi)
}

/// [`propagate`] returning the states at each of `times`.
pub fn propagate_sampled(
    boundary: &dyn BoundaryFunction,
    mu: f64,
    hbar: f64,
    psi0: &GridWavefunction,
    times: &[f64],
    dt: f64,
) -> Result<Vec<GridWavefunction>> {
    Propagator::new(boundary, mu, hbar, &psi0.grid).sample(psi0, times, dt)
}
