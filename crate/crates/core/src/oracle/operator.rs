use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::{GridWavefunction, PolarGrid};
use crate::domain::BoundaryFunction;
use crate::error::{invalid, Result};

/// Forward and inverse FFT plans along θ.
#[derive(Clone)]
pub(crate) struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    n: usize,
}

impl Spectral {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n), n }
    }

    /// Transforms every ring in place.
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Inverse transform including the `1/n` factor.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let s = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

/// `H_eff(t)` on a polar grid for an arbitrary boundary factor `R(θ, t)`:
///
/// ```text
/// H = -ħ²/2μ [ w² ∇² + w w''/r² + 2 w w' ∂θ/r² + (w'² + (w w')') ∂r/r
///              + 2 w w' ∂r∂θ/r + w'² ∂rr ] + iħ (Ṙ/R)(1 + r ∂r),   w = 1/R
/// ```
///
/// with primes denoting `∂θ`. Radial derivatives are second-order central
/// differences (the Laplacian and the dilation term in flux form), angular
/// derivatives are spectral.
pub struct EffectiveOperator<'a> {
    pub boundary: &'a dyn BoundaryFunction,
    pub t: f64,
    pub mu: f64,
    pub hbar: f64,
    pub(crate) grid: PolarGrid,
    /// `1/R²` per angle.
    pub(crate) inv_r2: Vec<f64>,
    /// `Ṙ/R` per angle.
    pub(crate) rate: Vec<f64>,
    deformation: Option<Deformation>,
    spectral: Spectral,
}

/// Coefficient fields of the θ-dependent terms.
struct Deformation {
    /// `w w''`
    value: Vec<f64>,
    /// `2 w w'`
    angular: Vec<f64>,
    /// `w'² + (w w')'`
    radial: Vec<f64>,
    /// `w'²`
    second: Vec<f64>,
}

impl<'a> EffectiveOperator<'a> {
    pub fn new(boundary: &'a dyn BoundaryFunction, mu: f64, hbar: f64, grid: &PolarGrid, t: f64) -> Self {
        Self::with_spectral(boundary, mu, hbar, grid, t, Spectral::new(grid.ntheta))
    }

    pub(crate) fn with_spectral(
        boundary: &'a dyn BoundaryFunction,
        mu: f64,
        hbar: f64,
        grid: &PolarGrid,
        t: f64,
        spectral: Spectral,
    ) -> Self {
        let n = grid.ntheta;
        let mut inv_r2 = Vec::with_capacity(n);
        let mut rate = Vec::with_capacity(n);
        let mut value = Vec::with_capacity(n);
        let mut angular = Vec::with_capacity(n);
        let mut radial = Vec::with_capacity(n);
        let mut second = Vec::with_capacity(n);
        for &th in &grid.thetas {
            let big_r = boundary.radius(th, t);
            let r1 = boundary.d_theta(th, t);
            let r2 = boundary.d_theta2(th, t);
            let w = 1.0 / big_r;
            let w1 = -r1 * w * w;
            let w2 = -r2 * w * w + 2.0 * r1 * r1 * w * w * w;
            inv_r2.push(w * w);
            rate.push(boundary.d_t(th, t) * w);
            value.push(w * w2);
            angular.push(2.0 * w * w1);
            radial.push(2.0 * w1 * w1 + w * w2);
            second.push(w1 * w1);
        }
        let deformation = if boundary.is_pantographic() {
            None
        } else {
            Some(Deformation { value, angular, radial, second })
        };
        Self { boundary, t, mu, hbar, grid: grid.clone(), inv_r2, rate, deformation, spectral }
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    /// `false` when the θ-dependent terms vanish identically.
    pub fn is_deformed(&self) -> bool {
        self.deformation.is_some()
    }

    /// `H_eff u`; the rim row of the result is zero.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        self.apply_parts(u, true)
    }

    /// Kinetic part `H₁ + H₃` only (the moving-frame energy operator).
    pub fn apply_kinetic(&self, u: &[Complex64]) -> Vec<Complex64> {
        self.apply_parts(u, false)
    }

    fn apply_parts(&self, u: &[Complex64], with_dilation: bool) -> Vec<Complex64> {
        let g = &self.grid;
        let (nr, nt) = (g.nr, g.ntheta);
        let dr = g.dr;
        let (u_t, u_tt) = theta_derivatives(&self.spectral, g, u);
        let kin = -self.hbar * self.hbar / (2.0 * self.mu);
        let i_hbar = Complex64::new(0.0, self.hbar);
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; u.len()];
        let half = nt / 2;
        for j in 0..nr - 1 {
            let r = g.radii[j];
            let outer = g.face(j);
            let inner = j as f64 * dr;
            for k in 0..nt {
                let c = u[g.index(j, k)];
                let up = u[g.index(j + 1, k)];
                let down = if j > 0 { u[g.index(j - 1, k)] } else { zero };
                let lap_r = (up * outer - c * (outer + inner) + down * inner) / (r * dr * dr);
                let lap = lap_r + u_tt[g.index(j, k)] / (r * r);
                let mut acc = lap * self.inv_r2[k];
                if let Some(d) = &self.deformation {
                    // the node at -Δr/2 is the node at +Δr/2 on the opposite ray
                    let ghost = |f: &[Complex64]| if j > 0 { f[g.index(j - 1, k)] } else { f[g.index(0, (k + half) % nt)] };
                    let u_r = (up - ghost(u)) / (2.0 * dr);
                    let u_rr = (up - c * 2.0 + ghost(u)) / (dr * dr);
                    let u_rt = (u_t[g.index(j + 1, k)] - ghost(&u_t)) / (2.0 * dr);
                    acc += c * (d.value[k] / (r * r))
                        + u_t[g.index(j, k)] * (d.angular[k] / (r * r))
                        + u_r * (d.radial[k] / r)
                        + u_rt * (d.angular[k] / r)
                        + u_rr * d.second[k];
                }
                let mut h = acc * kin;
                if with_dilation {
                    let flux = (up * (outer * outer) - down * (inner * inner)) / (2.0 * dr * r);
                    h += i_hbar * self.rate[k] * flux;
                }
                out[g.index(j, k)] = h;
            }
        }
        out
    }

    /// Pantographic part with θ-averaged coefficients; exact inverse of
    /// `1 + iτ H` available through [`BlockSolver`].
    pub(crate) fn averaged_coefficients(&self) -> (f64, f64) {
        let n = self.inv_r2.len() as f64;
        (self.inv_r2.iter().sum::<f64>() / n, self.rate.iter().sum::<f64>() / n)
    }

    pub(crate) fn spectral(&self) -> &Spectral {
        &self.spectral
    }
}

/// `H_eff ψ` as a new grid function at the operator's time.
pub fn apply_heff(op: &EffectiveOperator, psi: &GridWavefunction) -> Result<GridWavefunction> {
    if psi.grid != op.grid {
        return Err(invalid("psi", "grid does not match the operator"));
    }
    Ok(GridWavefunction { grid: psi.grid.clone(), values: op.apply(&psi.values), time: op.t })
}

/// Spectral `∂θ u` and `∂θθ u`; the Nyquist bin is dropped from `∂θ`.
pub(crate) fn theta_derivatives(
    spectral: &Spectral,
    grid: &PolarGrid,
    u: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let nt = grid.ntheta;
    let mut hat = u.to_vec();
    spectral.forward(&mut hat);
    let mut d1 = hat.clone();
    let mut d2 = hat;
    for row in 0..grid.nr {
        for k in 0..nt {
            let m = grid.wavenumber(k);
            let i = row * nt + k;
            d1[i] *= if k == nt / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, m) };
            d2[i] *= -m * m;
        }
    }
    spectral.inverse(&mut d1);
    spectral.inverse(&mut d2);
    (d1, d2)
}

/// Direct solver for `(1 + iτ H_p) x = b` where `H_p` is the pantographic
/// stencil with constant coefficients; block-diagonal over wavenumbers.
pub(crate) struct BlockSolver {
    grid: PolarGrid,
    spectral: Spectral,
    /// Per wavenumber: sub-, main and super-diagonal.
    bands: Vec<[Vec<Complex64>; 3]>,
}

impl BlockSolver {
    /// `inv_r2 = 1/R²`, `rate = Ṙ/R`, `tau = Δt / 2ħ`.
    pub(crate) fn new(
        grid: &PolarGrid,
        spectral: Spectral,
        mu: f64,
        hbar: f64,
        inv_r2: f64,
        rate: f64,
        tau: f64,
    ) -> Self {
        let n = grid.nr - 1;
        let dr = grid.dr;
        let kin = -hbar * hbar / (2.0 * mu) * inv_r2;
        let bands = (0..grid.ntheta)
            .map(|k| {
                let m = grid.wavenumber(k);
                let mut sub = vec![Complex64::new(0.0, 0.0); n];
                let mut main = vec![Complex64::new(1.0, 0.0); n];
                let mut sup = vec![Complex64::new(0.0, 0.0); n];
                for j in 0..n {
                    let r = grid.radii[j];
                    let outer = grid.face(j);
                    let inner = j as f64 * dr;
                    let lap_lo = inner / (r * dr * dr);
                    let lap_hi = outer / (r * dr * dr);
                    let lap_mid = -(outer + inner) / (r * dr * dr) - m * m / (r * r);
                    let flux_lo = -inner * inner / (2.0 * dr * r);
                    let flux_hi = outer * outer / (2.0 * dr * r);
                    // 1 + iτ (kin·L + iħ·rate·D)
                    let it = Complex64::new(0.0, tau);
                    let dil = Complex64::new(0.0, hbar * rate);
                    sub[j] = it * (lap_lo * kin + dil * flux_lo);
                    main[j] += it * (lap_mid * kin);
                    sup[j] = it * (lap_hi * kin + dil * flux_hi);
                }
                [sub, main, sup]
            })
            .collect();
        Self { grid: grid.clone(), spectral, bands }
    }

    pub(crate) fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let g = &self.grid;
        let (nr, nt) = (g.nr, g.ntheta);
        let mut hat = b.to_vec();
        self.spectral.forward(&mut hat);
        let columns: Vec<Vec<Complex64>> = (0..nt)
            .into_par_iter()
            .map(|k| {
                let rhs: Vec<Complex64> = (0..nr - 1).map(|j| hat[j * nt + k]).collect();
                let [sub, main, sup] = &self.bands[k];
                thomas(sub, main, sup, rhs)
            })
            .collect();
        for (k, col) in columns.iter().enumerate() {
            for (j, v) in col.iter().enumerate() {
                hat[j * nt + k] = *v;
            }
        }
        for v in &mut hat[(nr - 1) * nt..] {
            *v = Complex64::new(0.0, 0.0);
        }
        self.spectral.inverse(&mut hat);
        hat
    }
}

/// Tridiagonal solve without pivoting.
pub(crate) fn thomas(sub: &[Complex64], main: &[Complex64], sup: &[Complex64], mut rhs: Vec<Complex64>) -> Vec<Complex64> {
    let n = main.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = main[0];
    c[0] = sup[0] / denom;
    rhs[0] /= denom;
    for j in 1..n {
        denom = main[j] - sub[j] * c[j - 1];
        c[j] = sup[j] / denom;
        let prev = rhs[j - 1];
        rhs[j] = (rhs[j] - sub[j] * prev) / denom;
    }
    for j in (0..n - 1).rev() {
        let next = rhs[j + 1];
        rhs[j] -= c[j] * next;
    }
    rhs
}
