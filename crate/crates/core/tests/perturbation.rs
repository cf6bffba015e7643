use billiard_core::oracle::{brute_element, brute_element_integrated};
use billiard_core::pantograph::beta;
use billiard_core::perturbation::{
    amplitudes, element, element_series, f_integral, find_mode, w_integral, w_integral_with, xi, Accuracy, Assembly,
    ModePair, RadialIntegral, TimeIntegral,
};
use billiard_core::specfun::{bessel_j, bessel_j_prime, basis, BesselMode};
use billiard_core::{BilliardError, DomainSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn spec() -> DomainSpec {
    DomainSpec { mu: 1.0, hbar: 1.0, r0: 1.0, kappa: 0.1, gamma: 0.5, epsilon: 0.05 }
}

fn mode(m: i32, n: u32) -> BesselMode {
    BesselMode::new(m, n, &spec()).unwrap()
}

fn pair(source: (i32, u32), target: (i32, u32)) -> ModePair {
    ModePair::new(mode(source.0, source.1), mode(target.0, target.1))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn trapezoid(f: impl Fn(f64) -> Complex64, a: f64, b: f64, steps: usize) -> Complex64 {
    let h = (b - a) / steps as f64;
    let inner: Complex64 = (1..steps).map(|i| f(a + i as f64 * h)).sum();
    (f(a) + f(b)) * (0.5 * h) + inner * h
}

#[test]
fn xi_example() {
    let s = spec();
    let p = pair((0, 1), (1, 1));
    let expect = (p.target.energy - p.source.energy) * 5.0 / 1.5;
    assert!((xi(&p, &s, 5.0) - expect).abs() < 1e-12);
    assert_eq!(xi(&pair((1, 1), (1, 1)), &s, 9.0), 0.0);
    assert_eq!(xi(&p, &s, 5.0), beta(&p.source, &s, 5.0, 0.0) - beta(&p.target, &s, 5.0, 0.0));
}

#[test]
fn radial_integral_examples() {
    let s = spec();
    assert!((w_integral(RadialIntegral::Overlap, &pair((1, 1), (1, 1)), &s) - 1.0).abs() < 1e-12);

    // gradient integral against a 2000-interval composite Simpson rule
    let p = pair((0, 1), (1, 1));
    let (t, src) = (p.target, p.source);
    let integrand = |r: f64| {
        let f = t.norm * bessel_j(1, t.k * r).unwrap();
        if r == 0.0 {
            // J₁(kr)/r → k/2, J₀(0) = 1
            return t.norm * t.k / 2.0 * src.norm;
        }
        let g = src.norm * bessel_j(0, src.k * r).unwrap();
        let gr = src.norm * src.k * bessel_j_prime(0, src.k * r).unwrap();
        f * (g / r + gr)
    };
    let oracle = simpson(integrand, 0.0, s.r0, 2000);
    let got = w_integral(RadialIntegral::Gradient, &p, &s);
    assert!(((got - oracle) / oracle).abs() < 1e-9, "{got} vs {oracle}");

    assert!(w_integral(RadialIntegral::Gradient, &pair((0, 1), (0, 2)), &s).is_infinite());
}

#[test]
fn time_integral_examples() {
    let s = spec();
    let p = pair((0, 1), (1, 1));
    for kind in TimeIntegral::ALL {
        assert_eq!(f_integral(kind, &p, &s, 0.0), Complex64::new(0.0, 0.0));
    }
    // diagonal pair: ∫ (iħ/2) ġ ds = (iħ/2) g
    let diag = pair((1, 1), (1, 1));
    for t in [0.7, 4.0, 30.0] {
        let got = f_integral(TimeIntegral::RampRate, &diag, &s, t);
        assert!((got - Complex64::new(0.0, 0.5 * s.hbar * s.g(t))).norm() < 1e-10);
    }
    // F1 for (0,1) -> (1,1) against a 10⁴-step trapezoid rule
    let p = pair((0, 1), (1, 1));
    let t = 2.0;
    let integrand = |u: f64| {
        Complex64::new(s.hbar * s.hbar / (2.0 * s.mu) * s.g(u) / s.lambda(u).powi(2), 0.0)
            * Complex64::from_polar(1.0, xi(&p, &s, u))
    };
    let oracle = trapezoid(integrand, 0.0, t, 10_000);
    let got = f_integral(TimeIntegral::Kinetic, &p, &s, t);
    assert!((got - oracle).norm() < 1e-8, "{got} vs {oracle}");
}

/// `∫₀ᵗ brute_element ds` by trapezoid rules with `n` and `2n` steps,
/// Richardson-combined.
fn dense_brute(p: &ModePair, s: &DomainSpec, t: f64, n: usize) -> Complex64 {
    let coarse = trapezoid(|u| brute_element(p, s, u), 0.0, t, n);
    let fine = trapezoid(|u| brute_element(p, s, u), 0.0, t, 2 * n);
    (fine * 4.0 - coarse) / 3.0
}

#[test]
fn element_matches_dense_brute_force() {
    let s = spec();
    let p = pair((1, 1), (0, 1));
    let oracle = dense_brute(&p, &s, 1.0, 200);
    let got = element(&p, &s, 1.0).total();
    assert!((got - oracle).norm() / oracle.norm() < 1e-6, "{got} vs {oracle}");
}

#[test]
fn printed_assembly_is_rejected_by_the_oracle() {
    let s = spec();
    let printed = Accuracy { assembly: Assembly::AsPrinted, ..Accuracy::default() };
    for (source, target) in [((0, 1), (1, 1)), ((1, 2), (2, 1))] {
        let p = pair(source, target);
        let oracle = brute_element_integrated(&p, &s, 2.0);
        let derived = element(&p, &s, 2.0).total();
        let as_printed = element_series(&p, &s, &[2.0], printed)[0].total();
        assert!((derived - oracle).norm() / oracle.norm() < 1e-6);
        assert!((as_printed - oracle).norm() / oracle.norm() > 0.1, "{source:?} -> {target:?}");
    }
}

#[test]
fn element_examples() {
    let s = spec();
    for (a, b) in [((0, 1), (0, 2)), ((0, 3), (0, 1))] {
        assert_eq!(element(&pair(a, b), &s, 3.0).total(), Complex64::new(0.0, 0.0));
    }
    for (a, b) in [((0, 1), (1, 1)), ((2, 1), (1, 3)), ((-1, 2), (0, 1))] {
        assert_eq!(element(&pair(a, b), &s, 0.0).total(), Complex64::new(0.0, 0.0));
    }
    let e = element(&pair((0, 1), (1, 2)), &s, 4.0);
    assert_eq!(e.total(), e.h1 + e.h2 + e.h3);
    assert!(e.wvals.iter().all(|w| w.is_finite()));
}

#[test]
fn amplitude_examples() {
    let s = spec();
    let initial = mode(0, 1);
    let targets: Vec<BesselMode> = [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (0, 2), (2, 1)].iter().map(|&(m, n)| mode(m, n)).collect();
    let times: Vec<f64> = (0..=20).map(|i| 2.5 * f64::from(i)).collect();

    let quiet = amplitudes(&initial, &targets, &s.with_epsilon(0.0), &times).unwrap();
    for target in &targets {
        let expect = if target == &initial { 1.0 } else { 0.0 };
        assert!(quiet.populations(target).unwrap().iter().all(|&p| p == expect));
    }

    let table = amplitudes(&initial, &targets, &s, &times).unwrap();
    assert!(table.within_regime());
    for (target, amps) in &table.entries {
        let expect = if target == &initial { 1.0 } else { 0.0 };
        assert_eq!(amps[0], Complex64::new(expect, 0.0));
        if !ModePair::new(initial, *target).allowed() && target != &initial {
            assert!(amps.iter().all(|a| a.norm() <= 1e-12));
        }
    }
    for n in 1..=2 {
        let (p, q) = (table.populations(&mode(1, n)).unwrap(), table.populations(&mode(-1, n)).unwrap());
        for (a, b) in p.iter().zip(&q) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    let strong = amplitudes(&initial, &targets, &s.with_epsilon(0.6), &times).unwrap();
    assert!(!strong.within_regime());
    assert!(amplitudes(&initial, &targets, &s, &[1.0, 0.5]).is_err());
}

#[test]
fn unknown_modes_are_reported() {
    let table = basis(2, 2, &spec()).unwrap();
    assert!(find_mode(&table, 1, 2).is_ok());
    assert!(matches!(find_mode(&table, 3, 1), Err(BilliardError::UnknownMode { m: 3, n: 1 })));
}

#[test]
fn populations_are_insensitive_to_tighter_accuracy() {
    let s = spec();
    let initial = mode(0, 1);
    let targets = [mode(1, 1), mode(1, 3), mode(-1, 4)];
    let times: Vec<f64> = (1..=10).map(|i| 5.0 * f64::from(i)).collect();
    let fine = Accuracy { radial_order: 512, time_tolerance: 2.5e-11, ..Accuracy::default() };
    let a = amplitudes(&initial, &targets, &s, &times).unwrap();
    let b = billiard_core::perturbation::amplitudes_with(&initial, &targets, &s, &times, fine).unwrap();
    for t in &targets {
        for (x, y) in a.populations(t).unwrap().iter().zip(b.populations(t).unwrap()) {
            assert!((x - y).abs() < 1e-6);
        }
    }
}

#[test]
fn radial_integrals_are_stable_under_order_doubling() {
    let s = spec();
    for (a, b) in [((0, 1), (1, 1)), ((1, 3), (2, 2)), ((-3, 2), (-2, 3))] {
        let p = pair(a, b);
        for kind in RadialIntegral::ALL {
            let coarse = w_integral(kind, &p, &s);
            let fine = w_integral_with(kind, &p, &s, 256);
            assert!((coarse - fine).abs() <= 1e-10, "{kind:?} {a:?} {b:?}");
        }
    }
}

fn any_mode() -> impl Strategy<Value = (i32, u32)> {
    (-4i32..=4, 1u32..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn selection_rule(a in any_mode(), b in any_mode(), t in 0.0f64..30.0) {
        let p = pair(a, b);
        prop_assert_eq!(p.allowed(), (a.0 - b.0).abs() == 1);
        let total = element(&p, &spec(), t).total();
        if !p.allowed() {
            prop_assert_eq!(total, Complex64::new(0.0, 0.0));
        } else {
            prop_assert!(total.is_finite());
        }
    }

    #[test]
    fn populations_scale_with_epsilon_squared(a in any_mode(), step in prop::sample::select(vec![-1i32, 1]), n in 1u32..=4, t in 0.5f64..40.0) {
        let initial = mode(a.0, a.1);
        let target = mode(a.0 + step, n);
        let s = spec();
        let p1 = amplitudes(&initial, &[target], &s.with_epsilon(0.02), &[t]).unwrap().populations(&target).unwrap()[0];
        let p2 = amplitudes(&initial, &[target], &s.with_epsilon(0.04), &[t]).unwrap().populations(&target).unwrap()[0];
        prop_assert!((p2 - 4.0 * p1).abs() <= 1e-12 * p2.max(1e-300), "{p1} {p2}");
    }

    #[test]
    fn mirror_pairs_share_radial_and_time_integrals(n in 1u32..=4, np in 1u32..=4, t in 0.1f64..30.0) {
        let s = spec();
        let up = pair((0, np), (1, n));
        let down = pair((0, np), (-1, n));
        for kind in RadialIntegral::ALL {
            prop_assert_eq!(w_integral(kind, &up, &s), w_integral(kind, &down, &s));
        }
        for kind in TimeIntegral::ALL {
            prop_assert_eq!(f_integral(kind, &up, &s, t), f_integral(kind, &down, &s, t));
        }
    }
}
