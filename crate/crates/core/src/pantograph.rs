//! Shape-preserving (pantographic) dynamics on the fixed disk.
//!
//! For uniform dilation `λ = 1 + κt` every disk eigenmode `χ` generates an
//! exact solution `φ = e^{i(α r² + β)} χ` of the fixed-domain equation with
//! `α = μ λ λ̇ / 2ħ` and `β̇ = -E / (ħ λ²)`. The moving-domain counterparts
//! `ψ = λ⁻¹ e^{iβ + iα (r/λ)²} χ(r/λ, θ)` form an orthonormal basis.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::domain::DomainSpec;
use crate::error::{BilliardError, Result};
use crate::specfun::{BesselMode, DiskQuadrature, Jet};

/// Angles used for the boundary contact integral.
pub const CONTACT_ANGLES: usize = 256;

/// Boundary values above this make the contact formula meaningless.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

/// Quadratic phase coefficient `α(t) = μ λ(t) κ / 2ħ`, shared by every mode.
pub fn alpha(spec: &DomainSpec, t: f64) -> f64 {
    spec.mu * spec.lambda(t) * spec.lambda_dot(t) / (2.0 * spec.hbar)
}

/// Mode phase `β(t) = β(0) - (E/ħ) t / (1 + κ t)`.
pub fn beta(mode: &BesselMode, spec: &DomainSpec, t: f64, beta0: f64) -> f64 {
    beta0 - mode.energy / spec.hbar * t / spec.lambda(t)
}

/// Fixed-picture exact solution `e^{i(α r² + β)} χ(r, θ)` (with `β(0) = 0`).
pub fn phi_exact(mode: &BesselMode, spec: &DomainSpec, r: f64, theta: f64, t: f64) -> Complex64 {
    let phase = alpha(spec, t) * r * r + beta(mode, spec, t, 0.0);
    mode.value(r, theta) * Complex64::from_polar(1.0, phase)
}

/// Jet of [`phi_exact`].
pub fn phi_exact_jet(mode: &BesselMode, spec: &DomainSpec, r: f64, theta: f64, t: f64) -> Jet {
    mode.jet(r, theta).dressed(alpha(spec, t), beta(mode, spec, t, 0.0), r)
}

/// Moving-picture exact solution; zero outside `r <= λ(t) r0`.
pub fn psi_exact(mode: &BesselMode, spec: &DomainSpec, r: f64, theta: f64, t: f64) -> Complex64 {
    let lambda = spec.lambda(t);
    let s = r / lambda;
    if s > spec.r0 {
        return Complex64::new(0.0, 0.0);
    }
    phi_exact(mode, spec, s, theta, t) / lambda
}

/// Point sample of a fixed-picture field: value and gradient components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub value: Complex64,
    pub d_r: Complex64,
    pub d_theta: Complex64,
}

/// A fixed-picture wavefunction that can report its gradient.
pub trait FieldSampler {
    fn sample(&self, r: f64, theta: f64) -> FieldPoint;
}

impl<F: Fn(f64, f64) -> FieldPoint> FieldSampler for F {
    fn sample(&self, r: f64, theta: f64) -> FieldPoint {
        self(r, theta)
    }
}

/// Normalized superposition of exact pantographic solutions.
#[derive(Debug, Clone, PartialEq)]
pub struct PantographicState {
    pub coefficients: Vec<(BesselMode, Complex64)>,
    pub beta0: Vec<f64>,
    pub time: f64,
}

impl PantographicState {
    /// Requires `Σ|c|² = 1` within 1e-12.
    pub fn new(coefficients: Vec<(BesselMode, Complex64)>) -> Result<Self> {
        let norm: f64 = coefficients.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(BilliardError::NotNormalized(norm));
        }
        let beta0 = vec![0.0; coefficients.len()];
        Ok(Self { coefficients, beta0, time: 0.0 })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(mut coefficients: Vec<(BesselMode, Complex64)>) -> Result<Self> {
        let norm: f64 = coefficients.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(BilliardError::NotNormalized(0.0));
        }
        for (_, c) in coefficients.iter_mut() {
            *c /= norm;
        }
        Self::new(coefficients)
    }

    pub fn single(mode: BesselMode) -> Self {
        Self { coefficients: vec![(mode, Complex64::new(1.0, 0.0))], beta0: vec![0.0], time: 0.0 }
    }

    pub fn at(&self, t: f64) -> Self {
        Self { time: t, ..self.clone() }
    }

    /// Amplitudes are constants of motion; only phases evolve.
    pub fn jet(&self, spec: &DomainSpec, r: f64, theta: f64) -> Jet {
        let a = alpha(spec, self.time);
        let mut acc = Jet::zero();
        for ((mode, c), b0) in self.coefficients.iter().zip(&self.beta0) {
            let b = beta(mode, spec, self.time, *b0);
            acc = acc.add(&mode.jet(r, theta).scale(*c * Complex64::from_polar(1.0, b)));
        }
        acc.dressed(a, 0.0, r)
    }

    pub fn phi(&self, spec: &DomainSpec, r: f64, theta: f64) -> Complex64 {
        self.jet(spec, r, theta).v
    }

    pub fn psi(&self, spec: &DomainSpec, r: f64, theta: f64) -> Complex64 {
        let lambda = spec.lambda(self.time);
        let s = r / lambda;
        if s > spec.r0 {
            return Complex64::new(0.0, 0.0);
        }
        self.phi(spec, s, theta) / lambda
    }

    /// Field sampler at the state's time.
    pub fn field<'a>(&'a self, spec: &'a DomainSpec) -> impl FieldSampler + 'a {
        move |r: f64, theta: f64| {
            let j = self.jet(spec, r, theta);
            FieldPoint { value: j.v, d_r: j.r, d_theta: j.t }
        }
    }
}

/// Contact formula `Ė = -ħ² λ̇ / (2μ λ³) ∫ dθ (r² |∇φ|²)|_{r = r0}`.
///
/// Uses the gradient reported by the sampler on the rim; for spectral states
/// that gradient is analytic.
pub fn energy_rate<S: FieldSampler + ?Sized>(state: &S, spec: &DomainSpec, t: f64) -> f64 {
    let lambda = spec.lambda(t);
    let lambda_dot = spec.lambda_dot(t);
    if lambda_dot == 0.0 {
        return 0.0;
    }
    let r0 = spec.r0;
    let dtheta = 2.0 * PI / CONTACT_ANGLES as f64;
    let mut worst: f64 = 0.0;
    let mut integral = 0.0;
    for k in 0..CONTACT_ANGLES {
        let th = k as f64 * dtheta;
        let p = state.sample(r0, th);
        worst = worst.max(p.value.norm());
        integral += r0 * r0 * (p.d_r.norm_sqr() + p.d_theta.norm_sqr() / (r0 * r0));
    }
    if worst > BOUNDARY_TOLERANCE {
        warn!("state does not vanish on the rim (|phi| = {worst:e}); contact energy rate is unreliable");
    }
    -spec.hbar * spec.hbar * lambda_dot / (2.0 * spec.mu * lambda.powi(3)) * integral * dtheta
}

/// `⟨φ| -ħ²/(2μλ²) ∇² |φ⟩`, evaluated as `ħ²/(2μλ²) ∫ |∇φ|²` by quadrature.
pub fn mean_energy<S: FieldSampler + ?Sized>(state: &S, spec: &DomainSpec, t: f64) -> f64 {
    mean_energy_with(state, spec, t, &DiskQuadrature::standard(spec.r0))
}

pub fn mean_energy_with<S: FieldSampler + ?Sized>(
    state: &S,
    spec: &DomainSpec,
    t: f64,
    quad: &DiskQuadrature,
) -> f64 {
    let lambda = spec.lambda(t);
    let grad = quad.integrate(|r, th| {
        let p = state.sample(r, th);
        Complex64::new(p.d_r.norm_sqr() + p.d_theta.norm_sqr() / (r * r), 0.0)
    });
    spec.hbar * spec.hbar / (2.0 * spec.mu * lambda * lambda) * grad.re
}

/// Pantographic Hamiltonian `-ħ²/(2μλ²) ∇² + iħ (λ̇/λ)(1 + r ∂r)` applied to a jet.
pub fn apply_pantographic(jet: &Jet, spec: &DomainSpec, r: f64, t: f64) -> Complex64 {
    let lambda = spec.lambda(t);
    let kinetic = jet.laplacian(r) * (-spec.hbar * spec.hbar / (2.0 * spec.mu * lambda * lambda));
    let dilation = Complex64::new(0.0, spec.hbar * spec.lambda_dot(t) / lambda) * (jet.v + jet.r * r);
    kinetic + dilation
}
