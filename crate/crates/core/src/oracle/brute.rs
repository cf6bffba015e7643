use std::f64::consts::PI;

use num_complex::Complex64;

use crate::pantograph::{alpha, beta};
use crate::perturbation::ModePair;
use crate::specfun::{gauss_legendre, BesselMode, DiskQuadrature, Jet};
use crate::DomainSpec;

/// Radial nodes of the brute-force disk rule.
pub const BRUTE_RADIAL: usize = 160;
/// Angular nodes of the brute-force disk rule.
pub const BRUTE_ANGULAR: usize = 32;
/// Gauss nodes per time panel.
const TIME_NODES: usize = 12;
/// Largest phase advance per time panel.
const PANEL_PHASE: f64 = 0.5;

/// A mode's radial profile and angular factor tabulated on a disk rule.
struct Tabulated {
    mode: BesselMode,
    radial: Vec<[f64; 3]>,
    angular: Vec<Complex64>,
}

impl Tabulated {
    fn new(mode: &BesselMode, quad: &DiskQuadrature) -> Self {
        let radial = quad.radial.nodes.iter().map(|&r| mode.radial(r)).collect();
        let angular = quad
            .thetas
            .iter()
            .map(|&th| Complex64::from_polar((2.0 * PI).sqrt().recip(), f64::from(mode.m) * th))
            .collect();
        Self { mode: *mode, radial, angular }
    }

    /// Jet of `e^{i(α r² + β)} χ` at node `(i, k)`.
    fn jet(&self, i: usize, k: usize, r: f64, a: f64, b: f64) -> Jet {
        let [f, fr, frr] = self.radial[i];
        let e = self.angular[k];
        let im = Complex64::new(0.0, f64::from(self.mode.m));
        Jet { v: e * f, r: e * fr, rr: e * frr, t: e * im * f, tt: e * im * im * f, rt: e * im * fr }.dressed(a, b, r)
    }
}

struct Sandwich {
    quad: DiskQuadrature,
    target: Tabulated,
    source: Tabulated,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Sandwich {
    fn new(pair: &ModePair, spec: &DomainSpec) -> Self {
        let quad = DiskQuadrature::new(spec.r0, BRUTE_RADIAL, BRUTE_ANGULAR).expect("valid brute rule");
        let target = Tabulated::new(&pair.target, &quad);
        let source = Tabulated::new(&pair.source, &quad);
        let cos = quad.thetas.iter().map(|t| t.cos()).collect();
        let sin = quad.thetas.iter().map(|t| t.sin()).collect();
        Self { quad, target, source, cos, sin }
    }

    /// `⟨φ_σ(s)| H⁽¹⁾(s) |φ_σ'(s)⟩` with
    /// `H⁽¹⁾ = ε { (ħ²g/μλ²) cos θ ∇² - (ħ²g/2μλ²)(cos θ + 2 sin θ ∂θ)(1/r² + (1/r)∂r)
    ///           + iħ ġ cos θ (1 + r ∂r) }`.
    fn at(&self, spec: &DomainSpec, s: f64) -> Complex64 {
        let lam = spec.lambda(s);
        let (g, g_dot) = (spec.g(s), spec.g_dot(s));
        let hb2 = spec.hbar * spec.hbar;
        let lap_coef = spec.epsilon * hb2 * g / (spec.mu * lam * lam);
        let def_coef = -spec.epsilon * hb2 * g / (2.0 * spec.mu * lam * lam);
        let dil_coef = Complex64::new(0.0, spec.epsilon * spec.hbar * g_dot);
        let a = alpha(spec, s);
        let bt = beta(&self.target.mode, spec, s, 0.0);
        let bs = beta(&self.source.mode, spec, s, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for (i, (&r, &w)) in self.quad.radial.nodes.iter().zip(&self.quad.weights).enumerate() {
            let mut ring = Complex64::new(0.0, 0.0);
            for k in 0..self.quad.thetas.len() {
                let (c, sn) = (self.cos[k], self.sin[k]);
                let left = self.target.jet(i, k, r, a, bt);
                let right = self.source.jet(i, k, r, a, bs);
                let radial_part = right.v / (r * r) + right.r / r;
                let angular_part = right.t / (r * r) + right.rt / r;
                let h = right.laplacian(r) * (lap_coef * c)
                    + (radial_part * c + angular_part * (2.0 * sn)) * def_coef
                    + (right.v + right.r * r) * (dil_coef * c);
                ring += left.v.conj() * h;
            }
            total += ring * w;
        }
        total
    }
}

/// Instantaneous first-order sandwich by 2D quadrature of analytic jets.
pub fn brute_element(pair: &ModePair, spec: &DomainSpec, s: f64) -> Complex64 {
    Sandwich::new(pair, spec).at(spec, s)
}

/// `∫₀ᵗ brute_element(s) ds` by composite Gauss–Legendre panels.
pub fn brute_element_integrated(pair: &ModePair, spec: &DomainSpec, t: f64) -> Complex64 {
    if t <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let sandwich = Sandwich::new(pair, spec);
    let rate = (pair.target.energy - pair.source.energy).abs() / spec.hbar;
    let phase_span = rate * t / spec.lambda(t).min(1.0);
    let panels = ((phase_span / PANEL_PHASE).ceil() as usize).max((t * spec.gamma.max(1.0) * 2.0).ceil() as usize).max(1);
    let width = t / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = p as f64 * width;
        let rule = gauss_legendre(TIME_NODES, a, a + width).expect("valid panel");
        total += rule.integrate_complex(|s| sandwich.at(spec, s));
    }
    total
}
