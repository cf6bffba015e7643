use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::{bessel_zero, ladder};
use super::quadrature::gauss_legendre;
use crate::domain::DomainSpec;
use crate::error::{invalid, Result};

/// Radial nodes used to normalize modes and evaluate radial integrals.
pub const RADIAL_ORDER: usize = 128;

/// One Dirichlet eigenmode `(2π)^{-1/2} A J_{|m|}(k r) e^{imθ}` of the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselMode {
    pub m: i32,
    pub n: u32,
    /// `n`-th positive zero of `J_{|m|}`.
    pub zero: f64,
    /// Wavenumber `zero / r0`.
    pub k: f64,
    /// `ħ² k² / 2μ`.
    pub energy: f64,
    /// Radial normalization `A`.
    pub norm: f64,
}

impl BesselMode {
    pub fn new(m: i32, n: u32, spec: &DomainSpec) -> Result<Self> {
        Self::with_radial_order(m, n, spec, RADIAL_ORDER)
    }

    /// Same as [`BesselMode::new`] with a caller-chosen normalization rule.
    pub fn with_radial_order(m: i32, n: u32, spec: &DomainSpec, order: usize) -> Result<Self> {
        if !(spec.r0 > 0.0) {
            return Err(invalid("r0", "disk radius must be positive"));
        }
        let order_abs = m.unsigned_abs();
        let zero = bessel_zero(order_abs, n)?;
        let k = zero / spec.r0;
        let energy = spec.hbar * spec.hbar * k * k / (2.0 * spec.mu);
        let rule = gauss_legendre(order, 0.0, spec.r0)?;
        let integral = rule.integrate(|r| {
            let j = ladder(order_abs as usize, k * r)[order_abs as usize];
            r * j * j
        });
        Ok(Self { m, n, zero, k, energy, norm: integral.sqrt().recip() })
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }

    /// Same indices up to the sign of `m`.
    pub fn same_shell(&self, other: &BesselMode) -> bool {
        self.abs_m() == other.abs_m() && self.n == other.n
    }

    /// Radial profile `A J_{|m|}(k r)` and its first two `r` derivatives.
    pub fn radial(&self, r: f64) -> [f64; 3] {
        let order = self.abs_m() as usize;
        let x = self.k * r;
        let j = ladder(order + 2, x);
        let at = |i: i64| -> f64 {
            // J_{-i} = (-1)^i J_i
            if i < 0 {
                let v = j[(-i) as usize];
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            } else {
                j[i as usize]
            }
        };
        let o = order as i64;
        let d1 = 0.5 * (at(o - 1) - at(o + 1));
        let d2 = 0.25 * (at(o - 2) - 2.0 * at(o) + at(o + 2));
        [self.norm * at(o), self.norm * self.k * d1, self.norm * self.k * self.k * d2]
    }

    pub fn value(&self, r: f64, theta: f64) -> Complex64 {
        eigenmode_value(self, r, theta)
    }

    /// Value and partial derivatives at `(r, θ)`.
    pub fn jet(&self, r: f64, theta: f64) -> Jet {
        let [f, fr, frr] = self.radial(r);
        let phase = Complex64::from_polar((2.0 * PI).sqrt().recip(), f64::from(self.m) * theta);
        let im = Complex64::new(0.0, f64::from(self.m));
        Jet {
            v: phase * f,
            r: phase * fr,
            rr: phase * frr,
            t: phase * im * f,
            tt: phase * (im * im) * f,
            rt: phase * im * fr,
        }
    }
}

/// `(2π)^{-1/2} A J_{|m|}(k r) e^{imθ}`.
pub fn eigenmode_value(mode: &BesselMode, r: f64, theta: f64) -> Complex64 {
    let f = mode.radial(r)[0];
    Complex64::from_polar((2.0 * PI).sqrt().recip(), f64::from(mode.m) * theta) * f
}

/// A complex field and its derivatives at one point: value, `∂r`, `∂rr`,
/// `∂θ`, `∂θθ`, `∂r∂θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: Complex64,
    pub r: Complex64,
    pub rr: Complex64,
    pub t: Complex64,
    pub tt: Complex64,
    pub rt: Complex64,
}

impl Jet {
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { v: z, r: z, rr: z, t: z, tt: z, rt: z }
    }

    /// Polar Laplacian at radius `r > 0`.
    pub fn laplacian(&self, r: f64) -> Complex64 {
        self.rr + self.r / r + self.tt / (r * r)
    }

    /// `|∇f|²` at radius `r > 0`.
    pub fn grad_norm_sqr(&self, r: f64) -> f64 {
        self.r.norm_sqr() + self.t.norm_sqr() / (r * r)
    }

    /// Jet of `e^{i(a r² + b)} f`.
    pub fn dressed(&self, a: f64, b: f64, r: f64) -> Jet {
        let i = Complex64::new(0.0, 1.0);
        let e = Complex64::from_polar(1.0, a * r * r + b);
        let pr = i * (2.0 * a * r);
        let prr = i * (2.0 * a);
        Jet {
            v: e * self.v,
            r: e * (self.r + pr * self.v),
            rr: e * (self.rr + pr * self.r * 2.0 + (prr + pr * pr) * self.v),
            t: e * self.t,
            tt: e * self.tt,
            rt: e * (self.rt + pr * self.t),
        }
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet { v: c * self.v, r: c * self.r, rr: c * self.rr, t: c * self.t, tt: c * self.tt, rt: c * self.rt }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            r: self.r + o.r,
            rr: self.rr + o.rr,
            t: self.t + o.t,
            tt: self.tt + o.tt,
            rt: self.rt + o.rt,
        }
    }
}

/// Truncation set `|m| <= m_max`, `1 <= n <= n_max`, ordered by `m` then `n`.
pub fn basis(m_max: u32, n_max: u32, spec: &DomainSpec) -> Result<Vec<BesselMode>> {
    let m_max = m_max as i32;
    let mut out = Vec::with_capacity(((2 * m_max + 1) as u32 * n_max) as usize);
    for m in -m_max..=m_max {
        for n in 1..=n_max {
            out.push(BesselMode::new(m, n, spec)?);
        }
    }
    Ok(out)
}
