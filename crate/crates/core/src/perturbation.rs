//! First-order transition amplitudes for a dilating disk deforming into an
//! ellipse, `R = λ(t) [1 + ε g(t) cos θ]`.
//!
//! The interaction-picture matrix element `∫₀ᵗ ⟨φ_σ|H⁽¹⁾(s)|φ_σ'⟩ ds`
//! factorizes into five time integrals `F` (carrying the phase `e^{iξ}`)
//! and four radial integrals `W`. The angular integrals produce the
//! selection rule `m = m' ± 1`.

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::domain::DomainSpec;
use crate::error::{BilliardError, Result};
use crate::pantograph::beta;
use crate::specfun::legendre_reference as quadrature_nodes;
use crate::specfun::{gauss_legendre, BesselMode, RADIAL_ORDER};

/// Total off-initial population beyond which a run is flagged as outside
/// the perturbative regime.
pub const REGIME_LIMIT: f64 = 0.25;

/// Absolute tolerance of the time integrals.
pub const TIME_TOLERANCE: f64 = 1e-10;

/// Largest phase advance `|Δξ|` allowed inside one time panel.
const MAX_PANEL_PHASE: f64 = std::f64::consts::FRAC_PI_4;

/// Transition `source (σ') -> target (σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePair {
    pub source: BesselMode,
    pub target: BesselMode,
}

impl ModePair {
    pub fn new(source: BesselMode, target: BesselMode) -> Self {
        Self { source, target }
    }

    /// `|m - m'| = 1`.
    pub fn allowed(&self) -> bool {
        (self.target.m - self.source.m).abs() == 1
    }

    pub fn reversed(&self) -> Self {
        Self { source: self.target, target: self.source }
    }

    /// Angular factor of the `cos θ` terms, `δ_{m,m'+1} + δ_{m,m'-1}`.
    fn cos_factor(&self) -> f64 {
        if self.allowed() {
            1.0
        } else {
            0.0
        }
    }

    /// Angular factor of `cos θ + 2 sin θ ∂θ`:
    /// `(1/2 + m') δ_{m,m'+1} + (1/2 - m') δ_{m,m'-1}`.
    fn deformation_factor(&self) -> f64 {
        let mp = f64::from(self.source.m);
        match self.target.m - self.source.m {
            1 => 0.5 + mp,
            -1 => 0.5 - mp,
            _ => 0.0,
        }
    }
}

/// Radial integrals, normalized by `A_σ A_σ'`, with `J = J_{|m|}(k_σ r)` and
/// `J' = J_{|m'|}(k_σ' r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialIntegral {
    /// `∫ J (1/r + ∂r) J' dr`
    Gradient,
    /// `∫ r J J' dr`
    Overlap,
    /// `∫ r³ J J' dr`
    CubicMoment,
    /// `∫ r² J ∂r J' dr`
    Dilation,
}

impl RadialIntegral {
    pub const ALL: [RadialIntegral; 4] =
        [RadialIntegral::Gradient, RadialIntegral::Overlap, RadialIntegral::CubicMoment, RadialIntegral::Dilation];

    /// Position `1..=4` in the conventional numbering.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k.checked_sub(1)?).copied()
    }
}

/// Time integrals `∫₀ᵗ h(s) e^{iξ(s)} ds` with
/// `h = ħ²g/(2μλ²), iħ g λ̇/λ, -μ g λ̇², (iħ/2) ġ, -(μ/2) ġ λ λ̇`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeIntegral {
    Kinetic,
    DilationRate,
    DilationSquare,
    RampRate,
    RampDilation,
}

impl TimeIntegral {
    pub const ALL: [TimeIntegral; 5] = [
        TimeIntegral::Kinetic,
        TimeIntegral::DilationRate,
        TimeIntegral::DilationSquare,
        TimeIntegral::RampRate,
        TimeIntegral::RampDilation,
    ];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k.checked_sub(1)?).copied()
    }
}

/// How the `F·W` products are combined into the three contributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Assembly {
    /// Coefficients obtained by expanding the sandwich of the first-order
    /// operator with `φ = e^{i(αr² + β)} χ`; agrees with [`crate::oracle::brute_element`].
    #[default]
    Derived,
    /// `h1 = εD[2F2W2 + F3W3 + 2F2W4 - k'²F1W2]`, `h2 = εD[F4W1 + F5W3 + F4W4]`,
    /// `h3 = εD3[F1W1 + F2W2]`; kept for comparison only.
    AsPrinted,
}

/// Numerical settings of the element evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub radial_order: usize,
    pub time_tolerance: f64,
    pub assembly: Assembly,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self { radial_order: RADIAL_ORDER, time_tolerance: TIME_TOLERANCE, assembly: Assembly::Derived }
    }
}

/// Phase `ξ = β_σ'(t) - β_σ(t)` with `β(0) = 0`.
pub fn xi(pair: &ModePair, spec: &DomainSpec, t: f64) -> f64 {
    beta(&pair.source, spec, t, 0.0) - beta(&pair.target, spec, t, 0.0)
}

pub fn w_integral(kind: RadialIntegral, pair: &ModePair, spec: &DomainSpec) -> f64 {
    w_integral_with(kind, pair, spec, RADIAL_ORDER)
}

/// Radial integral by Gauss–Legendre quadrature on `[0, r0]`.
///
/// The gradient integral diverges when both orders vanish; that case returns
/// `+∞` and is annihilated by the selection rule in [`element`].
pub fn w_integral_with(kind: RadialIntegral, pair: &ModePair, spec: &DomainSpec, order: usize) -> f64 {
    if kind == RadialIntegral::Gradient && pair.target.m == 0 && pair.source.m == 0 {
        return f64::INFINITY;
    }
    let rule = gauss_legendre(order, 0.0, spec.r0).expect("positive order and radius");
    rule.integrate(|r| {
        let [f, _, _] = pair.target.radial(r);
        let [g, gr, _] = pair.source.radial(r);
        match kind {
            RadialIntegral::Gradient => f * (g / r + gr),
            RadialIntegral::Overlap => r * f * g,
            RadialIntegral::CubicMoment => r * r * r * f * g,
            RadialIntegral::Dilation => r * r * f * gr,
        }
    })
}

fn all_w(pair: &ModePair, spec: &DomainSpec, order: usize) -> [f64; 4] {
    RadialIntegral::ALL.map(|k| w_integral_with(k, pair, spec, order))
}

/// Integrand weights `h_k(s)` (without the phase).
fn time_weights(spec: &DomainSpec, s: f64) -> [Complex64; 5] {
    let (hbar, mu) = (spec.hbar, spec.mu);
    let lam = spec.lambda(s);
    let lam_dot = spec.lambda_dot(s);
    let g = spec.g(s);
    let g_dot = spec.g_dot(s);
    [
        Complex64::new(hbar * hbar / (2.0 * mu) * g / (lam * lam), 0.0),
        Complex64::new(0.0, hbar * g * lam_dot / lam),
        Complex64::new(-mu * g * lam_dot * lam_dot, 0.0),
        Complex64::new(0.0, 0.5 * hbar * g_dot),
        Complex64::new(-0.5 * mu * g_dot * lam * lam_dot, 0.0),
    ]
}

type Vec5 = [Complex64; 5];

fn add5(a: &mut Vec5, b: &Vec5) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += *y;
    }
}

/// Adaptive panel integration of all five time integrals over `[a, b]`.
struct TimeIntegrator<'a> {
    spec: &'a DomainSpec,
    pair: &'a ModePair,
    density: f64,
    low: (Vec<f64>, Vec<f64>),
    high: (Vec<f64>, Vec<f64>),
}

impl<'a> TimeIntegrator<'a> {
    fn new(spec: &'a DomainSpec, pair: &'a ModePair, tol: f64, span: f64) -> Self {
        Self {
            spec,
            pair,
            density: tol / span.max(1.0),
            low: quadrature_nodes(10),
            high: quadrature_nodes(20),
        }
    }

    fn rule(&self, nodes: &(Vec<f64>, Vec<f64>), a: f64, b: f64) -> Vec5 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = [Complex64::new(0.0, 0.0); 5];
        for (x, w) in nodes.0.iter().zip(&nodes.1) {
            let s = mid + half * x;
            let phase = Complex64::from_polar(half * w, xi(self.pair, self.spec, s));
            let h = time_weights(self.spec, s);
            for (slot, hk) in acc.iter_mut().zip(&h) {
                *slot += hk * phase;
            }
        }
        acc
    }

    fn panel(&self, a: f64, b: f64, depth: u32) -> Vec5 {
        let coarse = self.rule(&self.low, a, b);
        let fine = self.rule(&self.high, a, b);
        let err = coarse.iter().zip(&fine).map(|(c, f)| (c - f).norm()).fold(0.0, f64::max);
        if err <= self.density * (b - a) || depth >= 40 {
            return fine;
        }
        let mid = 0.5 * (a + b);
        let mut left = self.panel(a, mid, depth + 1);
        add5(&mut left, &self.panel(mid, b, depth + 1));
        left
    }

    /// Splits `[a, b]` so each piece advances the phase by at most π/4.
    fn integrate(&self, a: f64, b: f64) -> Vec5 {
        let mut acc = [Complex64::new(0.0, 0.0); 5];
        if b <= a {
            return acc;
        }
        let dphase = (xi(self.pair, self.spec, b) - xi(self.pair, self.spec, a)).abs();
        let mut pieces = (dphase / MAX_PANEL_PHASE).ceil().max(1.0) as usize;
        // resolve the ramp as well
        if self.spec.gamma > 0.0 {
            pieces = pieces.max(((b - a) * self.spec.gamma).ceil() as usize);
        }
        let width = (b - a) / pieces as f64;
        for i in 0..pieces {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == pieces { b } else { lo + width };
            add5(&mut acc, &self.panel(lo, hi, 0));
        }
        acc
    }
}

fn f_series(pair: &ModePair, spec: &DomainSpec, times: &[f64], tol: f64) -> Vec<Vec5> {
    let span = times.iter().cloned().fold(0.0, f64::max);
    let integrator = TimeIntegrator::new(spec, pair, tol, span);
    let mut acc = [Complex64::new(0.0, 0.0); 5];
    let mut prev = 0.0;
    times
        .iter()
        .map(|&t| {
            add5(&mut acc, &integrator.integrate(prev, t));
            prev = t;
            acc
        })
        .collect()
}

/// One time integral at time `t`.
pub fn f_integral(kind: TimeIntegral, pair: &ModePair, spec: &DomainSpec, t: f64) -> Complex64 {
    f_integral_with(kind, pair, spec, t, TIME_TOLERANCE)
}

pub fn f_integral_with(kind: TimeIntegral, pair: &ModePair, spec: &DomainSpec, t: f64, tol: f64) -> Complex64 {
    f_series(pair, spec, &[t], tol)[0][kind as usize]
}

/// Matrix element split into the kinetic, dilation and deformation parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementBreakdown {
    pub h1: Complex64,
    pub h2: Complex64,
    pub h3: Complex64,
    pub fvals: [Complex64; 5],
    pub wvals: [f64; 4],
}

impl ElementBreakdown {
    pub fn total(&self) -> Complex64 {
        self.h1 + self.h2 + self.h3
    }

    fn forbidden(fvals: [Complex64; 5], wvals: [f64; 4]) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { h1: z, h2: z, h3: z, fvals, wvals }
    }

    /// `F_k · W_j` product entering the assembly.
    fn product(&self, f: TimeIntegral, w: RadialIntegral) -> Complex64 {
        self.fvals[f as usize] * self.wvals[w as usize]
    }
}

/// `∫₀ᵗ ⟨φ_σ(s)| H⁽¹⁾(s) |φ_σ'(s)⟩ ds` for `σ = pair.target`, `σ' = pair.source`.
pub fn element(pair: &ModePair, spec: &DomainSpec, t: f64) -> ElementBreakdown {
    element_series(pair, spec, &[t], Accuracy::default()).remove(0)
}

/// [`element`] on an increasing time grid, integrating cumulatively.
pub fn element_series(pair: &ModePair, spec: &DomainSpec, times: &[f64], acc: Accuracy) -> Vec<ElementBreakdown> {
    if !pair.allowed() || spec.epsilon == 0.0 {
        let z = [Complex64::new(0.0, 0.0); 5];
        return times.iter().map(|_| ElementBreakdown::forbidden(z, [0.0; 4])).collect();
    }
    let wvals = all_w(pair, spec, acc.radial_order);
    f_series(pair, spec, times, acc.time_tolerance)
        .into_iter()
        .map(|fvals| match acc.assembly {
            Assembly::Derived => assemble(pair, spec, fvals, wvals),
            Assembly::AsPrinted => assemble_as_printed(pair, spec, fvals, wvals),
        })
        .collect()
}

fn assemble(pair: &ModePair, spec: &DomainSpec, fvals: [Complex64; 5], wvals: [f64; 4]) -> ElementBreakdown {
    use RadialIntegral::*;
    use TimeIntegral::*;
    let mut out = ElementBreakdown::forbidden(fvals, wvals);
    let eps = spec.epsilon;
    let k2 = pair.source.k * pair.source.k;
    let cos = eps * pair.cos_factor();
    let def = eps * pair.deformation_factor();

    // ħ²/μ g λ⁻² cos θ ∇² acting on e^{iαr²} χ'
    out.h1 = (out.product(DilationRate, Overlap) + out.product(DilationSquare, CubicMoment) * 0.5
        + out.product(DilationRate, Dilation)
        - out.product(Kinetic, Overlap) * k2)
        * cos;
    // iħ ġ cos θ (1 + r ∂r)
    out.h2 = (out.product(RampRate, Overlap) + out.product(RampDilation, CubicMoment) + out.product(RampRate, Dilation))
        * cos;
    // -ħ²/2μ g λ⁻² (cos θ + 2 sin θ ∂θ)(1/r² + (1/r) ∂r)
    out.h3 = -(out.product(Kinetic, Gradient) + out.product(DilationRate, Overlap) * 0.5) * def;
    out
}

fn assemble_as_printed(pair: &ModePair, spec: &DomainSpec, fvals: [Complex64; 5], wvals: [f64; 4]) -> ElementBreakdown {
    use RadialIntegral::*;
    use TimeIntegral::*;
    let mut out = ElementBreakdown::forbidden(fvals, wvals);
    let k2 = pair.source.k * pair.source.k;
    let cos = spec.epsilon * pair.cos_factor();
    let def = spec.epsilon * pair.deformation_factor();
    out.h1 = (out.product(DilationRate, Overlap) * 2.0 + out.product(DilationSquare, CubicMoment)
        + out.product(DilationRate, Dilation) * 2.0
        - out.product(Kinetic, Overlap) * k2)
        * cos;
    out.h2 = (out.product(RampRate, Gradient) + out.product(RampDilation, CubicMoment) + out.product(RampRate, Dilation))
        * cos;
    out.h3 = (out.product(Kinetic, Gradient) + out.product(DilationRate, Overlap)) * def;
    out
}

/// First-order amplitudes `a_σ(t)` for a set of targets.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTable {
    pub times: Vec<f64>,
    pub initial: BesselMode,
    pub entries: Vec<(BesselMode, Vec<Complex64>)>,
    /// Largest `Σ_{σ≠initial} |a_σ|²` over the grid.
    pub leakage: f64,
}

impl AmplitudeTable {
    pub fn populations(&self, target: &BesselMode) -> Option<Vec<f64>> {
        self.entries
            .iter()
            .find(|(m, _)| m.m == target.m && m.n == target.n)
            .map(|(_, a)| a.iter().map(|c| c.norm_sqr()).collect())
    }

    pub fn within_regime(&self) -> bool {
        self.leakage < REGIME_LIMIT
    }
}

pub fn amplitudes(
    initial: &BesselMode,
    targets: &[BesselMode],
    spec: &DomainSpec,
    times: &[f64],
) -> Result<AmplitudeTable> {
    amplitudes_with(initial, targets, spec, times, Accuracy::default())
}

/// `a_σ(t) = δ_{σ,initial} - (i/ħ) ∫₀ᵗ ⟨φ_σ|H⁽¹⁾|φ_initial⟩ ds`.
pub fn amplitudes_with(
    initial: &BesselMode,
    targets: &[BesselMode],
    spec: &DomainSpec,
    times: &[f64],
    acc: Accuracy,
) -> Result<AmplitudeTable> {
    spec.validate()?;
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(crate::error::invalid("times", "grid must be non-negative and strictly increasing"));
    }
    let factor = Complex64::new(0.0, -1.0 / spec.hbar);
    let entries: Vec<(BesselMode, Vec<Complex64>)> = targets
        .par_iter()
        .map(|target| {
            let pair = ModePair::new(*initial, *target);
            let delta = if target.m == initial.m && target.n == initial.n { 1.0 } else { 0.0 };
            let amps = element_series(&pair, spec, times, acc)
                .iter()
                .map(|e| Complex64::new(delta, 0.0) + factor * e.total())
                .collect();
            (*target, amps)
        })
        .collect();
    let mut leakage: f64 = 0.0;
    for i in 0..times.len() {
        let s: f64 = entries
            .iter()
            .filter(|(m, _)| !(m.m == initial.m && m.n == initial.n))
            .map(|(_, a)| a[i].norm_sqr())
            .sum();
        leakage = leakage.max(s);
    }
    if leakage >= REGIME_LIMIT {
        warn!("first-order leakage reaches {leakage:.3}; outside the perturbative regime");
    }
    Ok(AmplitudeTable { times: times.to_vec(), initial: *initial, entries, leakage })
}

/// Looks up `(m, n)` in a mode table.
pub fn find_mode(table: &[BesselMode], m: i32, n: u32) -> Result<BesselMode> {
    table.iter().find(|b| b.m == m && b.n == n).copied().ok_or(BilliardError::UnknownMode { m, n })
}
