use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{invalid, BilliardError, Result};

/// Smallest radial and angular resolution accepted by the stencils.
pub const MIN_POINTS: usize = 16;

/// Tensor grid on the fixed disk.
///
/// Radial nodes sit at `r_j = (j + 1/2) Δr` for `j = 0..nr`, with
/// `Δr = r0 / (nr - 1/2)` so that the last node lies on the rim. The origin is
/// never a node; a node at `-Δr/2` is the node at `+Δr/2` across the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    pub nr: usize,
    pub ntheta: usize,
    pub r0: f64,
    pub dr: f64,
    pub dtheta: f64,
    pub radii: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl PolarGrid {
    pub fn new(r0: f64, nr: usize, ntheta: usize) -> Result<Self> {
        if nr < MIN_POINTS {
            return Err(BilliardError::GridTooSmall { what: "nr", got: nr, min: MIN_POINTS });
        }
        if ntheta < MIN_POINTS {
            return Err(BilliardError::GridTooSmall { what: "ntheta", got: ntheta, min: MIN_POINTS });
        }
        if !ntheta.is_multiple_of(2) {
            return Err(invalid("ntheta", "must be even so that every ray has an opposite ray"));
        }
        if !(r0 > 0.0) {
            return Err(invalid("r0", "disk radius must be positive"));
        }
        let dr = r0 / (nr as f64 - 0.5);
        let dtheta = 2.0 * PI / ntheta as f64;
        let mut radii: Vec<f64> = (0..nr).map(|j| (j as f64 + 0.5) * dr).collect();
        radii[nr - 1] = r0;
        let thetas = (0..ntheta).map(|k| k as f64 * dtheta).collect();
        Ok(Self { nr, ntheta, r0, dr, dtheta, radii, thetas })
    }

    pub fn len(&self) -> usize {
        self.nr * self.ntheta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of node `(j, k)`; rows are rings of constant radius.
    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.ntheta + k
    }

    /// `r_{j+1/2}`, the outer face of ring `j`.
    pub fn face(&self, j: usize) -> f64 {
        (j as f64 + 1.0) * self.dr
    }

    /// Signed angular wavenumber of FFT bin `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        if k < self.ntheta / 2 {
            k as f64
        } else {
            k as f64 - self.ntheta as f64
        }
    }

    /// Weighted sum `Σ r_j Δr Δθ conj(a) b`, the inner product under which
    /// the pantographic stencil is Hermitian.
    pub fn plain_inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for j in 0..self.nr {
            let row: Complex64 =
                (0..self.ntheta).map(|k| a[self.index(j, k)].conj() * b[self.index(j, k)]).sum();
            total += row * self.radii[j];
        }
        total * self.dr * self.dtheta
    }

    /// `∫ conj(a) b r dr dθ` by the midpoint rule with the leading
    /// origin correction, accurate to `O(Δr⁴)` for fields vanishing on the rim.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let ring = |j: usize| -> Complex64 {
            (0..self.ntheta).map(|k| a[self.index(j, k)].conj() * b[self.index(j, k)]).sum::<Complex64>() * self.dtheta
        };
        // ring integrals are even in r: G(r) ≈ G(0) + c r²
        let origin = (ring(0) * 9.0 - ring(1)) / 8.0;
        self.plain_inner(a, b) - origin * (self.dr * self.dr / 24.0)
    }
}

/// Complex field on a [`PolarGrid`] at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    pub grid: PolarGrid,
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl GridWavefunction {
    pub fn zeros(grid: PolarGrid, time: f64) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values, time }
    }

    /// Samples `f(r, θ)` at the nodes; the rim row is set to zero.
    pub fn sample<F: Fn(f64, f64) -> Complex64>(grid: PolarGrid, time: f64, f: F) -> Self {
        let mut out = Self::zeros(grid, time);
        for j in 0..out.grid.nr - 1 {
            for k in 0..out.grid.ntheta {
                let i = out.grid.index(j, k);
                out.values[i] = f(out.grid.radii[j], out.grid.thetas[k]);
            }
        }
        out
    }

    pub fn nr(&self) -> usize {
        self.grid.nr
    }

    pub fn ntheta(&self) -> usize {
        self.grid.ntheta
    }

    /// Value at `(j, k)` with `k` taken modulo `nθ`.
    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[self.grid.index(j, k % self.grid.ntheta)]
    }

    pub fn enforce_dirichlet(&mut self) {
        let start = self.grid.index(self.grid.nr - 1, 0);
        for v in &mut self.values[start..] {
            *v = Complex64::new(0.0, 0.0);
        }
    }

    /// Conserved discrete norm `Σ r |u|² Δr Δθ`.
    pub fn discrete_norm_sqr(&self) -> f64 {
        self.grid.plain_inner(&self.values, &self.values).re
    }

    /// `∫ |u|² r dr dθ` with the origin-corrected rule.
    pub fn norm_sqr(&self) -> f64 {
        self.grid.inner(&self.values, &self.values).re
    }

    pub fn inner(&self, other: &GridWavefunction) -> Complex64 {
        self.grid.inner(&self.values, &other.values)
    }

    /// `|⟨a, b⟩|² / (⟨a, a⟩ ⟨b, b⟩)`.
    pub fn fidelity(&self, other: &GridWavefunction) -> f64 {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Writes `nr nθ t` on the first line, then one `re im` pair per line in
    /// ring-major order.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {} {:e}", self.grid.nr, self.grid.ntheta, self.time)?;
        for v in &self.values {
            writeln!(out, "{:e} {:e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_snapshot<R: BufRead>(input: R, r0: f64) -> Result<Self> {
        let bad = |line: usize, what: &str| invalid("snapshot", format!("line {line}: {what}"));
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let header = header.map_err(|e| bad(1, &e.to_string()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(bad(1, "expected `nr ntheta t`"));
        }
        let nr: usize = fields[0].parse().map_err(|_| bad(1, "nr"))?;
        let ntheta: usize = fields[1].parse().map_err(|_| bad(1, "ntheta"))?;
        let time: f64 = fields[2].parse().map_err(|_| bad(1, "t"))?;
        let grid = PolarGrid::new(r0, nr, ntheta)?;
        let mut values = Vec::with_capacity(grid.len());
        for (i, line) in lines {
            let line = line.map_err(|e| bad(i + 1, &e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace().map(str::parse::<f64>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(re)), Some(Ok(im)), None) => values.push(Complex64::new(re, im)),
                _ => return Err(bad(i + 1, "expected `re im`")),
            }
        }
        if values.len() != grid.len() {
            return Err(invalid("snapshot", format!("expected {} values, found {}", grid.len(), values.len())));
        }
        Ok(Self { grid, values, time })
    }
}
