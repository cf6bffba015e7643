//! The acceptance criteria as runnable checks, shared by the `validate`
//! command line task and the `acceptance` test target.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::domain::{to_moving, BoundaryFunction, EllipticBoundary, UniformDilation};
use crate::oned::{
    dilation_matrix, energy_rate_1d, mean_energy_1d, propagate_1d, Box1DSpec,
};
use crate::oracle::{
    brute_element_integrated, fourth_order_derivative, project, propagate_sampled, GridWavefunction, PolarGrid,
};
use crate::pantograph::{energy_rate, mean_energy, mean_energy_with, phi_exact, PantographicState};
use crate::perturbation::{
    amplitudes, amplitudes_with, element, f_integral_with, w_integral_with, Accuracy, AmplitudeTable, ModePair,
    RadialIntegral, TimeIntegral, TIME_TOLERANCE,
};
use crate::specfun::{basis, bessel_zero, gauss_legendre, BesselMode, DiskQuadrature, RADIAL_ORDER};
use crate::{DomainSpec, Result};

const SEED: u64 = 0x5eed_b111;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:<3} {} {}: {} ({:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed<F>(id: &'static str, title: &'static str, check: F) -> CriterionReport
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let start = Instant::now();
    let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport { id, title, passed, detail, elapsed: start.elapsed() }
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    let mut out = vec![bessel_kernel(), unitarity(), pantographic_propagation(), energy_rate_2d(), element_fidelity()];
    out.extend(perturbation_vs_propagation());
    out.push(figure_one(None));
    out.push(one_dimensional());
    out.push(convergence_guards());
    out
}

/// Parameters of the first figure: ε = 0.05, κ = 0.1, γ = 5κ, unit ħ, μ, r0.
pub fn figure_spec() -> DomainSpec {
    DomainSpec { mu: 1.0, hbar: 1.0, r0: 1.0, kappa: 0.1, gamma: 0.5, epsilon: 0.05 }
}

fn mode(m: i32, n: u32, spec: &DomainSpec) -> Result<BesselMode> {
    BesselMode::new(m, n, spec)
}

/// Power series of `J_m`, used as an oracle independent of the library's
/// recurrences.
pub fn series_bessel(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = (1..=m).fold(1.0, |acc, k| acc * half / f64::from(k));
    let mut sum = term;
    for k in 1..80u32 {
        term *= -half * half / (f64::from(k) * f64::from(k + m));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `n`-th positive zero of `J_m` by a scan for sign changes followed by
/// bisection on [`series_bessel`].
pub fn series_zero(m: u32, n: u32) -> f64 {
    let step = 0.05;
    let mut a = step;
    let mut found = 0;
    loop {
        let b = a + step;
        if series_bessel(m, a) * series_bessel(m, b) < 0.0 {
            found += 1;
            if found == n {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if series_bessel(m, lo) * series_bessel(m, mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if hi - lo < 1e-16 {
                        break;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
    }
}

/// Largest deviation of the basis Gram matrix from the identity.
pub fn gram_deviation(modes: &[BesselMode], quad: &DiskQuadrature) -> f64 {
    let table: Vec<Vec<Complex64>> = modes
        .iter()
        .map(|b| {
            let mut v = Vec::with_capacity(quad.weights.len() * quad.thetas.len());
            for (&r, &w) in quad.radial.nodes.iter().zip(&quad.weights) {
                for &th in &quad.thetas {
                    v.push(b.value(r, th) * w.sqrt());
                }
            }
            v
        })
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..modes.len() {
        for j in i..modes.len() {
            let g: Complex64 = table[i].iter().zip(&table[j]).map(|(a, b)| a.conj() * b).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - expect).norm());
        }
    }
    worst
}

pub fn bessel_kernel() -> CriterionReport {
    timed("1", "Bessel kernel", || {
        let mut zero_err: f64 = 0.0;
        for (m, n) in [(0, 1), (1, 1), (0, 2)] {
            zero_err = zero_err.max((bessel_zero(m, n)? - series_zero(m, n)).abs());
        }
        let spec = DomainSpec::default();
        let modes = basis(5, 8, &spec)?;
        let gram = gram_deviation(&modes, &DiskQuadrature::standard(spec.r0));
        let passed = zero_err <= 1e-12 && gram <= 1e-10 && modes.len() == 88;
        Ok((passed, format!("zeros max err {zero_err:.2e}, {}-mode Gram deviation {gram:.2e}", modes.len())))
    })
}

/// `⟨a|b⟩` in the moving domain: Gauss–Legendre along each ray out to the
/// boundary and a periodic trapezoid in θ.
fn moving_inner<A, B>(a: A, b: B, boundary: &dyn BoundaryFunction, r0: f64, t: f64, nr: usize, ntheta: usize) -> Complex64
where
    A: Fn(f64, f64) -> Complex64,
    B: Fn(f64, f64) -> Complex64,
{
    let dtheta = 2.0 * PI / ntheta as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..ntheta {
        let th = (k as f64 + 0.5) * dtheta;
        let rim = boundary.radius(th, t) * r0;
        let rule = gauss_legendre(nr, 0.0, rim).expect("valid ray rule");
        total += rule.integrate_complex(|r| a(r, th).conj() * b(r, th) * r) * dtheta;
    }
    total
}

pub fn unitarity() -> CriterionReport {
    timed("2", "unitarity of the fixed-disk map", || {
        let spec = figure_spec();
        let boundary = EllipticBoundary::new(spec);
        let modes = basis(5, 8, &spec)?;
        let fixed = DiskQuadrature::new(spec.r0, 96, 64)?;
        let mut rng = StdRng::seed_from_u64(SEED);
        let mut worst: f64 = 0.0;
        for p in 0..20 {
            let a = modes[rng.gen_range(0..modes.len())];
            // half of the pairs share m so that the inner product is not trivially zero
            let b = if p % 2 == 0 {
                let same: Vec<&BesselMode> = modes.iter().filter(|b| b.m == a.m).collect();
                *same[rng.gen_range(0..same.len())]
            } else {
                modes[rng.gen_range(0..modes.len())]
            };
            for _ in 0..5 {
                let t = rng.gen_range(0.0..50.0);
                let fa = |r: f64, th: f64| phi_exact(&a, &spec, r, th, t);
                let fb = |r: f64, th: f64| phi_exact(&b, &spec, r, th, t);
                let on_disk = fixed.integrate(|r, th| fa(r, th).conj() * fb(r, th));
                let ma = to_moving(&fa, &boundary, t);
                let mb = to_moving(&fb, &boundary, t);
                let moving = moving_inner(ma, mb, &boundary, spec.r0, t, 128, 160);
                worst = worst.max((on_disk - moving).norm());
            }
        }
        Ok((worst <= 1e-10, format!("max |<a|b>_fixed - <Ua|Ub>_moving| = {worst:.2e} over 100 samples")))
    })
}

/// Fidelity and population drift of a grid run against the exact solution.
pub struct PantographRun {
    pub min_fidelity: f64,
    pub population_drift: f64,
}

pub fn pantographic_run(nr: usize, ntheta: usize, dt: f64) -> Result<PantographRun> {
    let spec = DomainSpec { epsilon: 0.0, ..figure_spec() };
    let boundary = UniformDilation { kappa: spec.kappa };
    let grid = PolarGrid::new(spec.r0, nr, ntheta)?;
    let initial = mode(0, 1, &spec)?;
    let watched = [mode(0, 1, &spec)?, mode(0, 2, &spec)?, mode(1, 1, &spec)?];
    let psi0 = GridWavefunction::sample(grid.clone(), 0.0, |r, th| phi_exact(&initial, &spec, r, th, 0.0));
    let start: Vec<f64> = watched.iter().map(|m| project(&psi0, m, &spec, 0.0).norm_sqr()).collect();
    let times: Vec<f64> = (1..=20).map(f64::from).collect();
    let states = propagate_sampled(&boundary, spec.mu, spec.hbar, &psi0, &times, dt)?;
    let mut min_fidelity: f64 = 1.0;
    let mut drift: f64 = 0.0;
    for (psi, &t) in states.iter().zip(&times) {
        let exact = GridWavefunction::sample(grid.clone(), t, |r, th| phi_exact(&initial, &spec, r, th, t));
        min_fidelity = min_fidelity.min(exact.fidelity(psi));
        for (m, p0) in watched.iter().zip(&start) {
            drift = drift.max((project(psi, m, &spec, t).norm_sqr() - p0).abs());
        }
    }
    Ok(PantographRun { min_fidelity, population_drift: drift })
}

pub fn pantographic_propagation() -> CriterionReport {
    timed("3", "exact pantographic solution", || {
        let run = pantographic_run(256, 64, 0.02)?;
        let passed = run.min_fidelity >= 1.0 - 1e-4 && run.population_drift <= 1e-6;
        Ok((
            passed,
            format!(
                "min fidelity 1 - {:.2e}, population drift {:.2e}",
                1.0 - run.min_fidelity,
                run.population_drift
            ),
        ))
    })
}

/// Worst relative gap between the contact formula and a five-point
/// derivative of the mean energy, and the largest contact rate seen.
pub fn contact_gap(state: &PantographicState, spec: &DomainSpec, centres: &[f64], quad: &DiskQuadrature) -> (f64, f64) {
    let h = 0.002;
    let mut worst: f64 = 0.0;
    let mut largest = f64::NEG_INFINITY;
    for &tc in centres {
        let times: Vec<f64> = (-2..=2).map(|i| tc + f64::from(i) * h).collect();
        let energies: Vec<f64> = times
            .iter()
            .map(|&t| {
                let s = state.at(t);
                let e = mean_energy_with(&s.field(spec), spec, t, quad);
                e
            })
            .collect();
        let fd = fourth_order_derivative(&times, &energies).expect("five uniform samples")[2];
        let s = state.at(tc);
        let contact = energy_rate(&s.field(spec), spec, tc);
        worst = worst.max(((contact - fd) / fd).abs());
        largest = largest.max(contact);
    }
    (worst, largest)
}

fn energy_states(spec: &DomainSpec) -> Result<Vec<(String, PantographicState)>> {
    let mut out = Vec::new();
    for (m, n) in [(0, 1), (1, 1), (2, 1)] {
        out.push((format!("({m},{n})"), PantographicState::single(mode(m, n, spec)?)));
    }
    let mut rng = StdRng::seed_from_u64(SEED ^ 4);
    let mut coefficients = Vec::new();
    for (m, n) in [(0, 1), (1, 1), (-2, 1), (0, 2)] {
        let c = Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI));
        coefficients.push((mode(m, n, spec)?, c));
    }
    out.push(("superposition".to_string(), PantographicState::normalized(coefficients)?));
    Ok(out)
}

const ENERGY_TIMES: [f64; 5] = [0.5, 3.0, 7.5, 12.0, 20.0];

pub fn energy_rate_2d() -> CriterionReport {
    timed("4", "two-dimensional energy rate", || {
        let spec = DomainSpec { epsilon: 0.0, ..figure_spec() };
        let quad = DiskQuadrature::standard(spec.r0);
        let mut worst: f64 = 0.0;
        let mut largest = f64::NEG_INFINITY;
        for (_, state) in energy_states(&spec)? {
            let (gap, top) = contact_gap(&state, &spec, &ENERGY_TIMES, &quad);
            worst = worst.max(gap);
            largest = largest.max(top);
        }
        let passed = worst <= 1e-4 && largest < 0.0;
        Ok((passed, format!("max relative gap {worst:.2e}, largest rate {largest:.3e}")))
    })
}

/// Random pairs `(source, target)` with `|m| ≤ 3`, `n ≤ 3`, filtered by the
/// selection rule.
pub fn random_pairs(spec: &DomainSpec, count: usize, allowed: bool, seed: u64) -> Result<Vec<ModePair>> {
    let modes = basis(3, 3, spec)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let pair = ModePair::new(modes[rng.gen_range(0..modes.len())], modes[rng.gen_range(0..modes.len())]);
        if pair.allowed() == allowed {
            out.push(pair);
        }
    }
    Ok(out)
}

pub fn element_fidelity() -> CriterionReport {
    timed("5", "assembled elements against brute-force quadrature", || {
        let spec = figure_spec();
        let times = [0.5, 2.0, 5.0];
        let mut worst: f64 = 0.0;
        for pair in random_pairs(&spec, 10, true, SEED ^ 5)? {
            for &t in &times {
                let assembled = element(&pair, &spec, t).total();
                let brute = brute_element_integrated(&pair, &spec, t);
                worst = worst.max((assembled - brute).norm() / brute.norm());
            }
        }
        let mut forbidden: f64 = 0.0;
        for pair in random_pairs(&spec, 20, false, SEED ^ 55)? {
            for &t in &times {
                forbidden = forbidden.max(element(&pair, &spec, t).total().norm());
            }
        }
        let passed = worst <= 1e-6 && forbidden <= 1e-12;
        Ok((passed, format!("max relative deviation {worst:.2e}, forbidden max {forbidden:.1e}")))
    })
}

/// Targets `(±1, n ≤ 4)` of the first figure.
pub fn figure_targets(spec: &DomainSpec) -> Result<Vec<BesselMode>> {
    let mut out = Vec::new();
    for m in [1, -1] {
        for n in 1..=4 {
            out.push(mode(m, n, spec)?);
        }
    }
    Ok(out)
}

/// Largest `|P_TDPT - P_grid|` over the targets of the first figure at
/// `t = 1, 2, …, t_end`, starting from the `(0,1)` mode.
pub fn population_discrepancy(epsilon: f64, t_end: u32, nr: usize, ntheta: usize, dt: f64) -> Result<f64> {
    let spec = figure_spec().with_epsilon(epsilon);
    spec.validate()?;
    let boundary = EllipticBoundary::new(spec);
    let grid = PolarGrid::new(spec.r0, nr, ntheta)?;
    let initial = mode(0, 1, &spec)?;
    let targets = figure_targets(&spec)?;
    let times: Vec<f64> = (1..=t_end).map(f64::from).collect();
    let table = amplitudes(&initial, &targets, &spec, &times)?;
    let psi0 = GridWavefunction::sample(grid, 0.0, |r, th| phi_exact(&initial, &spec, r, th, 0.0));
    let states = propagate_sampled(&boundary, spec.mu, spec.hbar, &psi0, &times, dt)?;
    let mut worst: f64 = 0.0;
    for target in &targets {
        let tdpt = table.populations(target).expect("target in table");
        for ((psi, &t), p) in states.iter().zip(&times).zip(tdpt) {
            worst = worst.max((project(psi, target, &spec, t).norm_sqr() - p).abs());
        }
    }
    Ok(worst)
}

/// Time step of the deformed grid runs.
pub const GRID_DT: f64 = 0.01;

pub fn perturbation_vs_propagation() -> Vec<CriterionReport> {
    let start = Instant::now();
    let (small, large) = rayon::join(
        || population_discrepancy(0.01, 50, 256, 64, GRID_DT),
        || population_discrepancy(0.05, 50, 256, 64, GRID_DT),
    );
    let elapsed = start.elapsed();
    let (bound, scaling) = match (small, large) {
        (Ok(small), Ok(large)) => {
            let limit = 5.0 * 0.01 * 0.01;
            let ratio = large / small;
            (
                (small <= limit, format!("max |dP| at eps = 0.01 is {small:.2e} (limit {limit:.1e})")),
                (
                    (15.0..=35.0).contains(&ratio),
                    format!("max |dP| at eps = 0.05 is {large:.2e}, ratio {ratio:.1} (expected 15..35)"),
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => ((false, format!("error: {e}")), (false, format!("error: {e}"))),
    };
    vec![
        CriterionReport {
            id: "6a",
            title: "first-order populations against the grid",
            passed: bound.0,
            detail: bound.1,
            elapsed,
        },
        CriterionReport {
            id: "6b",
            title: "discrepancy scaling with epsilon",
            passed: scaling.0,
            detail: scaling.1,
            elapsed,
        },
    ]
}

/// First-order populations of the first figure's targets on a uniform grid
/// of `samples` times in `[0, t_end]`.
pub fn figure_one_table(spec: &DomainSpec, t_end: f64, samples: usize) -> Result<AmplitudeTable> {
    spec.check_interval(t_end, samples)?;
    let initial = mode(0, 1, spec)?;
    let targets = figure_targets(spec)?;
    let times: Vec<f64> = (0..samples).map(|i| t_end * i as f64 / (samples - 1) as f64).collect();
    amplitudes(&initial, &targets, spec, &times)
}

/// CSV of the first figure: `t` in units of `1/κ` and one population column
/// per target.
pub fn table_csv(table: &AmplitudeTable, kappa: f64) -> String {
    let mut out = String::from("t_kappa");
    for (m, _) in &table.entries {
        out.push_str(&format!(",P({};{})", m.m, m.n));
    }
    out.push('\n');
    for (i, t) in table.times.iter().enumerate() {
        out.push_str(&format!("{:.6}", t * kappa));
        for (_, a) in &table.entries {
            out.push_str(&format!(",{:.10e}", a[i].norm_sqr()));
        }
        out.push('\n');
    }
    out
}

/// Populations must stay below this multiple of `ε²`.
pub const FIGURE_BOUND: f64 = 2.0;

pub fn figure_one(csv: Option<&std::path::Path>) -> CriterionReport {
    timed("7", "symmetry and shape of the first figure", || {
        let spec = figure_spec();
        let table = figure_one_table(&spec, 50.0, 201)?;
        if let Some(path) = csv {
            std::fs::write(path, table_csv(&table, spec.kappa))
                .map_err(|e| crate::error::invalid("csv", e.to_string()))?;
        }
        let pops = |m: i32, n: u32| table.populations(&mode(m, n, &spec).expect("valid mode")).expect("target");
        let mut mirror: f64 = 0.0;
        let mut start: f64 = 0.0;
        let mut peak: f64 = 0.0;
        for n in 1..=4 {
            let (p, q) = (pops(1, n), pops(-1, n));
            mirror = mirror.max(p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            start = start.max(p[0]).max(q[0]);
            peak = peak.max(p.iter().cloned().fold(0.0, f64::max));
        }
        let dominant = pops(1, 1);
        let dominates = (2..=4).all(|n| pops(1, n).iter().zip(&dominant).skip(1).all(|(p, d)| d > p));
        let scaled = peak / (spec.epsilon * spec.epsilon);
        let passed = mirror <= 1e-12 && dominates && start == 0.0 && scaled <= FIGURE_BOUND;
        Ok((
            passed,
            format!(
                "mirror gap {mirror:.1e}, (1,1) dominant: {dominates}, P(0) = {start:.1e}, peak/eps^2 = {scaled:.3}"
            ),
        ))
    })
}

/// Worst relative gap between the 1D contact law and a fourth-order
/// derivative of the mean energy along a Crank–Nicolson run.
pub fn contact_gap_1d(spec: &Box1DSpec, dt: f64) -> Result<f64> {
    let phi = spec.comoving_state(1, 0.0);
    let times: Vec<f64> = (0..=100).map(|i| 0.01 * f64::from(i)).collect();
    let mut trajectory = vec![phi.clone()];
    trajectory.extend(propagate_1d(spec, &phi, 0.0, &times[1..], dt)?);
    let energies = trajectory.iter().zip(&times).map(|(p, &t)| mean_energy_1d(spec, p, t)).collect::<Result<Vec<_>>>()?;
    let fd = fourth_order_derivative(&times, &energies)?;
    let mut worst: f64 = 0.0;
    for ((p, &t), d) in trajectory.iter().zip(&times).zip(&fd) {
        worst = worst.max(((energy_rate_1d(spec, p, t)? - d) / d).abs());
    }
    Ok(worst)
}

pub fn one_dimensional() -> CriterionReport {
    timed("8", "one-dimensional box", || {
        let spec = Box1DSpec::default();
        let d = dilation_matrix(&spec)?;
        let mut skew: f64 = 0.0;
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                skew = skew.max((v + d[j][i]).abs());
            }
        }
        let gap = contact_gap_1d(&spec, 5e-4)?;
        Ok((skew <= 1e-10 && gap <= 1e-4, format!("|D + D^T| max {skew:.1e}, contact vs FD gap {gap:.2e}")))
    })
}

/// One convergence probe: the change of a quantity under refinement and the
/// tolerance it is reported with.
struct Guard {
    name: &'static str,
    change: f64,
    tolerance: f64,
}

fn radial_guard(spec: &DomainSpec) -> Result<Guard> {
    let mut change: f64 = 0.0;
    for pair in random_pairs(spec, 8, true, SEED ^ 9)? {
        for kind in RadialIntegral::ALL {
            let coarse = w_integral_with(kind, &pair, spec, RADIAL_ORDER);
            if !coarse.is_finite() {
                continue;
            }
            let fine = w_integral_with(kind, &pair, spec, 2 * RADIAL_ORDER);
            change = change.max((coarse - fine).abs());
        }
    }
    Ok(Guard { name: "radial integrals", change, tolerance: 1e-10 })
}

fn time_guard(spec: &DomainSpec) -> Result<Guard> {
    let mut change: f64 = 0.0;
    for pair in random_pairs(spec, 4, true, SEED ^ 10)? {
        for kind in TimeIntegral::ALL {
            let coarse = f_integral_with(kind, &pair, spec, 5.0, TIME_TOLERANCE);
            let fine = f_integral_with(kind, &pair, spec, 5.0, TIME_TOLERANCE / 4.0);
            change = change.max((coarse - fine).norm() / coarse.norm().max(1.0));
        }
    }
    Ok(Guard { name: "time integrals", change, tolerance: TIME_TOLERANCE })
}

fn population_guard(spec: &DomainSpec) -> Result<Guard> {
    let initial = mode(0, 1, spec)?;
    let targets = figure_targets(spec)?;
    let times: Vec<f64> = (1..=50).map(f64::from).collect();
    let fine = Accuracy {
        radial_order: 4 * RADIAL_ORDER,
        time_tolerance: TIME_TOLERANCE / 4.0,
        ..Accuracy::default()
    };
    let a = amplitudes(&initial, &targets, spec, &times)?;
    let b = amplitudes_with(&initial, &targets, spec, &times, fine)?;
    let mut change: f64 = 0.0;
    for target in &targets {
        let (p, q) = (a.populations(target).expect("target"), b.populations(target).expect("target"));
        change = change.max(p.iter().zip(&q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    Ok(Guard { name: "first-order populations", change, tolerance: 1e-6 })
}

fn basis_guard(spec: &DomainSpec) -> Result<Guard> {
    let modes = basis(7, 10, spec)?;
    let change = gram_deviation(&modes, &DiskQuadrature::standard(spec.r0));
    Ok(Guard { name: "Gram matrix with |m| <= 7, n <= 10", change, tolerance: 1e-10 })
}

fn energy_guard(spec: &DomainSpec) -> Result<Guard> {
    let spec = DomainSpec { epsilon: 0.0, ..*spec };
    let coarse = DiskQuadrature::standard(spec.r0);
    let fine = DiskQuadrature::new(spec.r0, 256, 256)?;
    let mut change: f64 = 0.0;
    for (_, state) in energy_states(&spec)? {
        for &t in &ENERGY_TIMES {
            let s = state.at(t);
            let a = mean_energy(&s.field(&spec), &spec, t);
            let b = mean_energy_with(&s.field(&spec), &spec, t, &fine);
            change = change.max(((a - b) / a).abs());
        }
        let (gap, _) = contact_gap(&state, &spec, &ENERGY_TIMES[..2], &coarse);
        let (gap_fine, _) = contact_gap(&state, &spec, &ENERGY_TIMES[..2], &fine);
        change = change.max((gap - gap_fine).abs());
    }
    Ok(Guard { name: "energy rate", change, tolerance: 1e-4 })
}

fn pantograph_guard() -> Result<Guard> {
    let coarse = pantographic_run(256, 64, 0.02)?;
    let fine = pantographic_run(256, 64, 0.01)?;
    let change = (coarse.min_fidelity - fine.min_fidelity).abs();
    Ok(Guard { name: "pantographic fidelity, dt halved", change, tolerance: 1e-4 })
}

fn deformed_guard() -> Result<Guard> {
    let coarse = population_discrepancy(0.01, 10, 256, 64, 2.0 * GRID_DT)?;
    let fine = population_discrepancy(0.01, 10, 256, 64, GRID_DT)?;
    Ok(Guard { name: "grid population discrepancy, dt halved", change: (coarse - fine).abs(), tolerance: 5e-4 })
}

fn one_d_guard() -> Result<Guard> {
    let spec = Box1DSpec::default();
    let coarse = contact_gap_1d(&spec, 5e-4)?;
    let fine = contact_gap_1d(&Box1DSpec { nx: 2 * spec.nx - 1, ..spec }, 2.5e-4)?;
    Ok(Guard { name: "1D contact gap, grid and dt refined", change: (coarse - fine).abs(), tolerance: 1e-4 })
}

pub fn convergence_guards() -> CriterionReport {
    timed("9", "convergence guards", || {
        let spec = figure_spec();
        let guards = [
            radial_guard(&spec)?,
            time_guard(&spec)?,
            population_guard(&spec)?,
            basis_guard(&spec)?,
            energy_guard(&spec)?,
            pantograph_guard()?,
            deformed_guard()?,
            one_d_guard()?,
        ];
        let failing: Vec<&str> = guards.iter().filter(|g| g.change >= 10.0 * g.tolerance).map(|g| g.name).collect();
        let worst = guards.iter().map(|g| g.change / g.tolerance).fold(0.0, f64::max);
        let detail = if failing.is_empty() {
            format!("{} guards, largest change {worst:.2e} x tolerance", guards.len())
        } else {
            format!("exceeded: {}", failing.join(", "))
        };
        Ok((failing.is_empty(), detail))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_oracle_matches_tabulated_zeros() {
        assert!((series_zero(0, 1) - 2.404_825_557_695_773).abs() < 1e-13);
        assert!((series_zero(1, 1) - 3.831_705_970_207_512).abs() < 1e-13);
        assert!((series_zero(0, 2) - 5.520_078_110_286_311).abs() < 1e-13);
    }

    #[test]
    fn report_line_format() {
        let r = CriterionReport { id: "1", title: "x", passed: true, detail: "ok".into(), elapsed: Duration::ZERO };
        assert_eq!(r.to_string(), "criterion 1   PASS x: ok (0.0 s)");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let spec = figure_spec();
        let table = figure_one_table(&spec, 10.0, 5).unwrap();
        let csv = table_csv(&table, spec.kappa);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("t_kappa,P(1;1)"));
        assert_eq!(lines[1].split(',').count(), 9);
    }
}
