//! Moving star-shaped boundary `r = R(θ, t) r0` and the unitary map between
//! the moving domain and the fixed disk of radius `r0`.
//!
//! The map is `φ(s, θ) = R ψ(s R, θ)` with inverse `ψ(r, θ) = φ(r / R, θ) / R`;
//! it preserves `∫ |·|² r dr dθ`.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::error::{invalid, BilliardError, Result};

/// Angles sampled by the star-shape check.
pub const STAR_CHECK_ANGLES: usize = 720;

/// `ε λ sup f` above this is reported as leaving the small-deformation regime.
pub const SMALL_DEFORMATION_LIMIT: f64 = 0.2;

/// Physical parameters of the dilating, deforming box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub mu: f64,
    pub hbar: f64,
    /// Radius of the fixed disk.
    pub r0: f64,
    /// Dilation rate: `λ(t) = 1 + κ t`.
    pub kappa: f64,
    /// Deformation rate of the ramp `g(t) = 1 - e^{-γ t}`.
    pub gamma: f64,
    /// Asymptotic eccentricity.
    pub epsilon: f64,
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self { mu: 1.0, hbar: 1.0, r0: 1.0, kappa: 0.1, gamma: 0.5, epsilon: 0.05 }
    }
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [("mu", self.mu), ("hbar", self.hbar), ("r0", self.r0)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !self.kappa.is_finite() {
            return Err(invalid("kappa", "must be finite"));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be >= 0, got {}", self.gamma)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must lie in [0, 1), got {}", self.epsilon)));
        }
        Ok(())
    }

    pub fn lambda(&self, t: f64) -> f64 {
        1.0 + self.kappa * t
    }

    pub fn lambda_dot(&self, _t: f64) -> f64 {
        self.kappa
    }

    pub fn ramp(&self) -> ExponentialRamp {
        ExponentialRamp { gamma: self.gamma }
    }

    pub fn g(&self, t: f64) -> f64 {
        self.ramp().value(t)
    }

    pub fn g_dot(&self, t: f64) -> f64 {
        self.ramp().rate(t)
    }

    /// Copy with a different eccentricity.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..*self }
    }

    /// Checks `λ > 0` and the star property over `[0, t_end]`, and warns
    /// when the deformation stops being small.
    pub fn check_interval(&self, t_end: f64, samples: usize) -> Result<()> {
        let samples = samples.max(2);
        let mut worst: f64 = 0.0;
        for i in 0..samples {
            let t = t_end * i as f64 / (samples - 1) as f64;
            let lambda = self.lambda(t);
            if !(lambda > 0.0) {
                return Err(BilliardError::CollapsedDomain { t, lambda });
            }
            for k in 0..STAR_CHECK_ANGLES {
                let theta = 2.0 * PI * k as f64 / STAR_CHECK_ANGLES as f64;
                radius(self, theta, t)?;
            }
            worst = worst.max(self.epsilon * lambda * self.g(t));
        }
        if worst > SMALL_DEFORMATION_LIMIT {
            warn!("deformation eps*lambda*sup f reaches {worst:.3} (> {SMALL_DEFORMATION_LIMIT}); first-order results are unreliable");
        }
        Ok(())
    }
}

/// Time profile switching the deformation on.
pub trait DeformationRamp: Send + Sync {
    fn value(&self, t: f64) -> f64;
    fn rate(&self, t: f64) -> f64;
}

/// `g(t) = 1 - e^{-γ t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialRamp {
    pub gamma: f64,
}

impl DeformationRamp for ExponentialRamp {
    fn value(&self, t: f64) -> f64 {
        -(-self.gamma * t).exp_m1()
    }

    fn rate(&self, t: f64) -> f64 {
        self.gamma * (-self.gamma * t).exp()
    }
}

/// Exact elliptic boundary factor `λ(t) / (1 - ε g(t) cos θ)`.
pub fn radius(spec: &DomainSpec, theta: f64, t: f64) -> Result<f64> {
    let lambda = spec.lambda(t);
    if !(lambda > 0.0) {
        return Err(BilliardError::CollapsedDomain { t, lambda });
    }
    let denominator = 1.0 - spec.epsilon * spec.g(t) * theta.cos();
    if !(denominator > 0.0) {
        return Err(BilliardError::NotStarShaped { theta, t, denominator });
    }
    Ok(lambda / denominator)
}

/// First-order boundary factor `λ(t) (1 + ε g(t) cos θ)`.
pub fn linearized_radius(spec: &DomainSpec, theta: f64, t: f64) -> f64 {
    spec.lambda(t) * (1.0 + spec.epsilon * spec.g(t) * theta.cos())
}

/// Dimensionless boundary factor `R(θ, t)` with the derivatives needed by
/// the fixed-domain Hamiltonian.
pub trait BoundaryFunction: Send + Sync {
    fn radius(&self, theta: f64, t: f64) -> f64;
    fn d_theta(&self, theta: f64, t: f64) -> f64;
    fn d_theta2(&self, theta: f64, t: f64) -> f64;
    fn d_t(&self, theta: f64, t: f64) -> f64;
    /// `R` independent of `θ`.
    fn is_pantographic(&self) -> bool;
}

/// Uniform dilation `R = 1 + κ t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDilation {
    pub kappa: f64,
}

impl BoundaryFunction for UniformDilation {
    fn radius(&self, _theta: f64, t: f64) -> f64 {
        1.0 + self.kappa * t
    }
    fn d_theta(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn d_theta2(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn d_t(&self, _: f64, _: f64) -> f64 {
        self.kappa
    }
    fn is_pantographic(&self) -> bool {
        true
    }
}

/// Frozen scale `R ≡ c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedScale(pub f64);

impl BoundaryFunction for FixedScale {
    fn radius(&self, _: f64, _: f64) -> f64 {
        self.0
    }
    fn d_theta(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn d_theta2(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn d_t(&self, _: f64, _: f64) -> f64 {
        0.0
    }
    fn is_pantographic(&self) -> bool {
        true
    }
}

/// Dilating circle deforming into an ellipse, `R = λ / (1 - ε g cos θ)`,
/// with the exact (unexpanded) geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticBoundary {
    pub spec: DomainSpec,
}

impl EllipticBoundary {
    pub fn new(spec: DomainSpec) -> Self {
        Self { spec }
    }

    fn denominator(&self, theta: f64, t: f64) -> f64 {
        1.0 - self.spec.epsilon * self.spec.g(t) * theta.cos()
    }
}

impl BoundaryFunction for EllipticBoundary {
    fn radius(&self, theta: f64, t: f64) -> f64 {
        self.spec.lambda(t) / self.denominator(theta, t)
    }

    fn d_theta(&self, theta: f64, t: f64) -> f64 {
        let d = self.denominator(theta, t);
        let d_th = self.spec.epsilon * self.spec.g(t) * theta.sin();
        -self.spec.lambda(t) * d_th / (d * d)
    }

    fn d_theta2(&self, theta: f64, t: f64) -> f64 {
        let d = self.denominator(theta, t);
        let eg = self.spec.epsilon * self.spec.g(t);
        let d_th = eg * theta.sin();
        let d_thth = eg * theta.cos();
        self.spec.lambda(t) * (2.0 * d_th * d_th / (d * d * d) - d_thth / (d * d))
    }

    fn d_t(&self, theta: f64, t: f64) -> f64 {
        let d = self.denominator(theta, t);
        let d_t = -self.spec.epsilon * self.spec.g_dot(t) * theta.cos();
        self.spec.lambda_dot(t) / d - self.spec.lambda(t) * d_t / (d * d)
    }

    fn is_pantographic(&self) -> bool {
        self.spec.epsilon == 0.0
    }
}

/// Maps a moving-domain wavefunction to the fixed disk: `φ(s, θ) = R ψ(s R, θ)`.
pub fn to_fixed<'a, F>(
    psi: F,
    boundary: &'a dyn BoundaryFunction,
    t: f64,
) -> impl Fn(f64, f64) -> Complex64 + 'a
where
    F: Fn(f64, f64) -> Complex64 + 'a,
{
    move |s, theta| {
        let big_r = boundary.radius(theta, t);
        psi(s * big_r, theta) * big_r
    }
}

/// Inverse map: `ψ(r, θ) = φ(r / R, θ) / R`.
pub fn to_moving<'a, F>(
    phi: F,
    boundary: &'a dyn BoundaryFunction,
    t: f64,
) -> impl Fn(f64, f64) -> Complex64 + 'a
where
    F: Fn(f64, f64) -> Complex64 + 'a,
{
    move |r, theta| {
        let big_r = boundary.radius(theta, t);
        phi(r / big_r, theta) / big_r
    }
}
