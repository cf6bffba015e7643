use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Nodes and weights of an interpolatory rule on `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

/// Gauss–Legendre rule with `npoints` nodes on `[a, b]`.
pub fn gauss_legendre(npoints: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if npoints == 0 {
        return Err(invalid("npoints", "need at least one node"));
    }
    if !(a < b) {
        return Err(invalid("interval", format!("need a < b, got [{a}, {b}]")));
    }
    let (xs, ws) = legendre_reference(npoints);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    Ok(QuadratureRule {
        nodes: xs.iter().map(|x| mid + half * x).collect(),
        weights: ws.iter().map(|w| half * w).collect(),
        interval: (a, b),
    })
}

/// Nodes (ascending) and weights on `[-1, 1]`.
pub(crate) fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = w;
        xs[i] = -x;
        ws[i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor rule on the disk `r <= r0`: Gauss–Legendre in `r` (with the
/// Jacobian `r` folded into the weights) times the periodic trapezoid in θ.
#[derive(Debug, Clone)]
pub struct DiskQuadrature {
    pub radial: QuadratureRule,
    pub thetas: Vec<f64>,
    /// `r_i * w_i * 2π / nθ`
    pub weights: Vec<f64>,
}

impl DiskQuadrature {
    pub fn new(r0: f64, n_radial: usize, n_theta: usize) -> Result<Self> {
        if n_theta == 0 {
            return Err(invalid("n_theta", "need at least one angular node"));
        }
        let radial = gauss_legendre(n_radial, 0.0, r0)?;
        let dtheta = 2.0 * PI / n_theta as f64;
        let thetas = (0..n_theta).map(|k| k as f64 * dtheta).collect();
        let weights = radial.nodes.iter().zip(&radial.weights).map(|(r, w)| r * w * dtheta).collect();
        Ok(Self { radial, thetas, weights })
    }

    /// Default disk rule: 128 radial nodes, 128 angles.
    pub fn standard(r0: f64) -> Self {
        Self::new(r0, 128, 128).expect("valid default rule")
    }

    /// `∫∫ f(r, θ) r dr dθ`.
    pub fn integrate<F: FnMut(f64, f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (&r, &w) in self.radial.nodes.iter().zip(&self.weights) {
            let mut ring = Complex64::new(0.0, 0.0);
            for &th in &self.thetas {
                ring += f(r, th);
            }
            total += ring * w;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule() {
        let q = gauss_legendre(1, -1.0, 1.0).unwrap();
        assert_eq!(q.nodes.len(), 1);
        assert!(q.nodes[0].abs() < 1e-16);
        assert!((q.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let q = gauss_legendre(2, -1.0, 1.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((q.nodes[0] + s).abs() < 1e-15 && (q.nodes[1] - s).abs() < 1e-15);
        assert!((q.weights[0] - 1.0).abs() < 1e-15 && (q.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seventh_power_on_unit_interval() {
        let q = gauss_legendre(16, 0.0, 1.0).unwrap();
        assert!((q.integrate(|x| x.powi(7)) - 0.125).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_length() {
        for n in [1, 2, 5, 17, 64, 128, 256, 512] {
            let q = gauss_legendre(n, -0.5, 2.5).unwrap();
            let s: f64 = q.weights.iter().sum();
            assert!((s - 3.0).abs() / 3.0 < 1e-13, "n={n}: {s}");
            assert!(q.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_through_degree_2n_minus_1() {
        for n in 1..12 {
            let q = gauss_legendre(n, -1.0, 1.0).unwrap();
            for d in 0..(2 * n) {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((q.integrate(|x| x.powi(d as i32)) - exact).abs() < 1e-14, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn disk_area() {
        let d = DiskQuadrature::new(2.0, 8, 4).unwrap();
        let a = d.integrate(|_, _| Complex64::new(1.0, 0.0));
        assert!((a.re - 4.0 * PI).abs() < 1e-12);
    }
}
