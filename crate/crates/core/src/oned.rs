//! Symmetric dilating box in one dimension.
//!
//! The moving interval `[-R x0/2, R x0/2]` with `R = 1 + κt` is mapped onto
//! `[-x0/2, x0/2]`, where
//! `H = -ħ²/(2μR²) ∂xx + iħ (Ṙ/R)(1/2 + x ∂x)`.

use log::warn;
use num_complex::Complex64;

use crate::error::{invalid, BilliardError, Result};
use crate::oracle::operator::thomas;
use crate::pantograph::BOUNDARY_TOLERANCE;

/// Smallest accepted number of grid points.
pub const MIN_POINTS_1D: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box1DSpec {
    pub mu: f64,
    pub hbar: f64,
    /// Width of the box at `t = 0`.
    pub x0: f64,
    pub kappa: f64,
    /// Grid points including both walls.
    pub nx: usize,
}

impl Default for Box1DSpec {
    fn default() -> Self {
        Self { mu: 1.0, hbar: 1.0, x0: 1.0, kappa: 0.1, nx: 801 }
    }
}

impl Box1DSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("hbar", self.hbar), ("x0", self.x0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        if self.nx < MIN_POINTS_1D {
            return Err(BilliardError::GridTooSmall { what: "nx", got: self.nx, min: MIN_POINTS_1D });
        }
        Ok(())
    }

    pub fn scale(&self, t: f64) -> f64 {
        1.0 + self.kappa * t
    }

    pub fn dx(&self) -> f64 {
        self.x0 / (self.nx - 1) as f64
    }

    /// Nodes from `-x0/2` to `x0/2`.
    pub fn nodes(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.nx).map(|i| -0.5 * self.x0 + i as f64 * dx).collect()
    }

    fn check_scale(&self, t: f64) -> Result<f64> {
        let r = self.scale(t);
        if !(r > 0.0) {
            return Err(BilliardError::CollapsedDomain { t, lambda: r });
        }
        Ok(r)
    }

    /// Samples `f` at the nodes with the walls set to zero.
    pub fn sample<F: Fn(f64) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.nodes().into_iter().map(f).collect();
        v[0] = Complex64::new(0.0, 0.0);
        v[self.nx - 1] = Complex64::new(0.0, 0.0);
        v
    }

    /// Static eigenfunction `sqrt(2/x0) sin(nπ (x/x0 + 1/2))`.
    pub fn eigenfunction(&self, n: u32) -> Vec<Complex64> {
        let k = f64::from(n) * std::f64::consts::PI / self.x0;
        let a = (2.0 / self.x0).sqrt();
        self.sample(|x| Complex64::new(a * (k * (x + 0.5 * self.x0)).sin(), 0.0))
    }

    /// Exact co-moving solution `e^{i(α x² + β)} χ_n` at time `t`, with
    /// `α = μ R Ṙ / 2ħ` and `β(0) = 0`.
    pub fn comoving_state(&self, n: u32, t: f64) -> Vec<Complex64> {
        let r = self.scale(t);
        let alpha = self.mu * r * self.kappa / (2.0 * self.hbar);
        let k = f64::from(n) * std::f64::consts::PI / self.x0;
        let energy = self.hbar * self.hbar * k * k / (2.0 * self.mu);
        let beta = -energy / self.hbar * t / r;
        let a = (2.0 / self.x0).sqrt();
        self.sample(|x| Complex64::from_polar(a * (k * (x + 0.5 * self.x0)).sin(), alpha * x * x + beta))
    }
}

/// Bands of the dilation generator `1/2 + x ∂x` in the symmetric form
/// `(X D + D X)/2`: super-diagonal `x_{i+1/2}/2Δx`, sub-diagonal
/// `-x_{i-1/2}/2Δx`, zero diagonal. Interior rows only.
fn dilation_bands(spec: &Box1DSpec) -> (Vec<f64>, Vec<f64>) {
    let x = spec.nodes();
    let dx = spec.dx();
    let n = spec.nx;
    let upper = (0..n - 1).map(|i| 0.5 * (x[i] + x[i + 1]) / (2.0 * dx)).collect();
    let lower = (1..n).map(|i| -0.5 * (x[i] + x[i - 1]) / (2.0 * dx)).collect();
    (upper, lower)
}

/// Dense matrix (row-major, interior nodes) of the dilation generator.
pub fn dilation_matrix(spec: &Box1DSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let (upper, lower) = dilation_bands(spec);
    let m = spec.nx - 2;
    let mut out = vec![vec![0.0; m]; m];
    for i in 0..m {
        // interior row i is node i + 1
        if i + 1 < m {
            out[i][i + 1] = upper[i + 1];
        }
        if i > 0 {
            out[i][i - 1] = lower[i];
        }
    }
    Ok(out)
}

/// `H φ` with the walls held at zero.
pub fn apply_h1d(spec: &Box1DSpec, phi: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    spec.validate()?;
    if phi.len() != spec.nx {
        return Err(invalid("phi", format!("expected {} samples, got {}", spec.nx, phi.len())));
    }
    let r = spec.check_scale(t)?;
    let (kin, dil) = coefficients(spec, r);
    let dx = spec.dx();
    let (upper, lower) = dilation_bands(spec);
    let mut out = vec![Complex64::new(0.0, 0.0); spec.nx];
    for i in 1..spec.nx - 1 {
        let lap = (phi[i + 1] - phi[i] * 2.0 + phi[i - 1]) / (dx * dx);
        let gen = phi[i + 1] * upper[i] + phi[i - 1] * lower[i - 1];
        out[i] = lap * kin + gen * dil;
    }
    Ok(out)
}

/// `(-ħ²/2μR², iħ Ṙ/R)`.
fn coefficients(spec: &Box1DSpec, r: f64) -> (f64, Complex64) {
    (-spec.hbar * spec.hbar / (2.0 * spec.mu * r * r), Complex64::new(0.0, spec.hbar * spec.kappa / r))
}

/// `⟨φ| -ħ²/(2μR²) ∂xx |φ⟩` by the trapezoid rule.
pub fn mean_energy_1d(spec: &Box1DSpec, phi: &[Complex64], t: f64) -> Result<f64> {
    let r = spec.check_scale(t)?;
    let dx = spec.dx();
    let (kin, _) = coefficients(spec, r);
    let mut acc = 0.0;
    for i in 1..spec.nx - 1 {
        let lap = (phi[i + 1] - phi[i] * 2.0 + phi[i - 1]) / (dx * dx);
        acc += (phi[i].conj() * lap).re;
    }
    Ok(acc * kin * dx)
}

/// Contact law `Ė = -ħ² Ṙ x0 / (4μR³) [|φ'(x0/2)|² + |φ'(-x0/2)|²]`, with
/// fourth-order one-sided wall derivatives.
pub fn energy_rate_1d(spec: &Box1DSpec, phi: &[Complex64], t: f64) -> Result<f64> {
    spec.validate()?;
    let r = spec.check_scale(t)?;
    let n = spec.nx;
    if phi.len() != n {
        return Err(invalid("phi", format!("expected {n} samples, got {}", phi.len())));
    }
    let wall = phi[0].norm().max(phi[n - 1].norm());
    if wall > BOUNDARY_TOLERANCE {
        warn!("wavefunction does not vanish at the walls (|phi| = {wall:e}); contact rate is unreliable");
    }
    let dx = spec.dx();
    let one_sided = |f: &dyn Fn(usize) -> Complex64| {
        (f(0) * -25.0 + f(1) * 48.0 - f(2) * 36.0 + f(3) * 16.0 - f(4) * 3.0) / (12.0 * dx)
    };
    let left = one_sided(&|i| phi[i]);
    let right = one_sided(&|i| phi[n - 1 - i]);
    let contact = left.norm_sqr() + right.norm_sqr();
    Ok(-spec.hbar * spec.hbar * spec.kappa * spec.x0 / (4.0 * spec.mu * r.powi(3)) * contact)
}

/// Crank–Nicolson steps with the Hamiltonian at the step midpoint; returns
/// the states at each of `times` (increasing, starting after `t0`).
pub fn propagate_1d(
    spec: &Box1DSpec,
    phi0: &[Complex64],
    t0: f64,
    times: &[f64],
    dt: f64,
) -> Result<Vec<Vec<Complex64>>> {
    spec.validate()?;
    if !(dt > 0.0) {
        return Err(invalid("dt", "time step must be positive"));
    }
    let n = spec.nx;
    let dx = spec.dx();
    let (upper, lower) = dilation_bands(spec);
    let mut phi = phi0.to_vec();
    let mut t = t0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - t;
        if span < 0.0 {
            return Err(invalid("times", "must be increasing"));
        }
        let steps = (span / dt - 1e-9).ceil().max(0.0) as usize;
        for _ in 0..steps {
            let h = span / steps as f64;
            let r = spec.check_scale(t + 0.5 * h)?;
            let (kin, dil) = coefficients(spec, r);
            let it = Complex64::new(0.0, h / (2.0 * spec.hbar));
            let hphi = apply_h1d(spec, &phi, t + 0.5 * h)?;
            let rhs: Vec<Complex64> = (1..n - 1).map(|i| phi[i] - it * hphi[i]).collect();
            let m = n - 2;
            let mut sub = vec![Complex64::new(0.0, 0.0); m];
            let mut main = vec![Complex64::new(0.0, 0.0); m];
            let mut sup = vec![Complex64::new(0.0, 0.0); m];
            for j in 0..m {
                let i = j + 1;
                sub[j] = it * (Complex64::new(kin / (dx * dx), 0.0) + dil * lower[i - 1]);
                main[j] = Complex64::new(1.0, 0.0) + it * (-2.0 * kin / (dx * dx));
                sup[j] = it * (Complex64::new(kin / (dx * dx), 0.0) + dil * upper[i]);
            }
            let x = thomas(&sub, &main, &sup, rhs);
            phi[1..n - 1].copy_from_slice(&x);
            t += h;
        }
        t = target;
        out.push(phi.clone());
    }
    Ok(out)
}

/// `Σ |φ|² Δx`.
pub fn norm_sqr_1d(spec: &Box1DSpec, phi: &[Complex64]) -> f64 {
    phi.iter().map(|c| c.norm_sqr()).sum::<f64>() * spec.dx()
}
