use std::f64::consts::PI;

use billiard_core::domain::{
    linearized_radius, radius, to_fixed, to_moving, BoundaryFunction, EllipticBoundary, FixedScale, UniformDilation,
};
use billiard_core::specfun::{gauss_legendre, BesselMode, DiskQuadrature};
use billiard_core::{BilliardError, DomainSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn moving_norm(f: &dyn Fn(f64, f64) -> Complex64, boundary: &dyn BoundaryFunction, r0: f64, t: f64) -> f64 {
    let n = 96;
    let dtheta = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let th = k as f64 * dtheta;
            let rule = gauss_legendre(96, 0.0, boundary.radius(th, t) * r0).unwrap();
            rule.integrate(|r| f(r, th).norm_sqr() * r) * dtheta
        })
        .sum()
}

#[test]
fn radius_examples() {
    let spec = DomainSpec::default();
    let circle = DomainSpec { epsilon: 0.0, ..spec };
    for th in [0.0, 1.0, 2.5] {
        assert_eq!(radius(&circle, th, 7.0).unwrap(), circle.lambda(7.0));
        assert_eq!(radius(&spec, th, 0.0).unwrap(), 1.0);
    }
    let frozen = DomainSpec { kappa: 0.0, ..spec };
    assert!((radius(&frozen, 0.0, 200.0).unwrap() - 1.0 / 0.95).abs() < 1e-12);
    assert!((1.0 / 0.95f64 - 1.0526316).abs() < 1e-7);
    // linearization agrees to first order
    let t = 3.0;
    let gap = (radius(&spec, 0.4, t).unwrap() - linearized_radius(&spec, 0.4, t)).abs();
    assert!(gap < 2.0 * (spec.epsilon * spec.g(t)).powi(2) * spec.lambda(t));
}

#[test]
fn star_violation_fails_fast() {
    let spec = DomainSpec { epsilon: 1.5, ..DomainSpec::default() };
    assert!(matches!(radius(&spec, 0.0, 10.0), Err(BilliardError::NotStarShaped { .. })));
    assert!(spec.check_interval(10.0, 11).is_err());
    assert!(DomainSpec::default().check_interval(50.0, 51).is_ok());
}

#[test]
fn pure_dilation_example() {
    let spec = DomainSpec::default();
    let mode = BesselMode::new(0, 1, &spec).unwrap();
    let phi = |r: f64, th: f64| mode.value(r, th);
    let double = FixedScale(2.0);
    let psi = to_moving(phi, &double, 0.0);
    for r in [0.0, 0.3, 1.1, 1.9] {
        assert!((psi(r, 0.7) - mode.value(r / 2.0, 0.7) / 2.0).norm() < 1e-15);
    }
    assert!(psi(2.0 * spec.r0, 0.3).norm() < 1e-12);
    let identity = FixedScale(1.0);
    let same = to_fixed(|r, th| mode.value(r, th), &identity, 0.0);
    assert_eq!(same(0.4, 1.0), mode.value(0.4, 1.0));
}

#[test]
fn moving_state_vanishes_on_the_moving_rim() {
    let spec = DomainSpec::default();
    let boundary = EllipticBoundary::new(spec);
    let mode = BesselMode::new(2, 3, &spec).unwrap();
    let t = 12.0;
    let psi = to_moving(|r, th| mode.value(r, th), &boundary, t);
    for k in 0..32 {
        let th = 2.0 * PI * k as f64 / 32.0;
        let rim = boundary.radius(th, t) * spec.r0;
        assert!(psi(rim, th).norm() < 1e-12);
        // approaching the rim from inside
        let near = psi(rim * (1.0 - 1e-9), th).norm();
        let farther = psi(rim * (1.0 - 1e-6), th).norm();
        assert!(near < 1e-7 && near < farther);
    }
}

#[test]
fn norm_is_preserved() {
    let spec = DomainSpec::default();
    let boundary = EllipticBoundary::new(spec);
    let mode = BesselMode::new(1, 2, &spec).unwrap();
    for t in [0.0, 4.0, 30.0] {
        let psi = to_moving(|r, th| mode.value(r, th), &boundary, t);
        assert!((moving_norm(&psi, &boundary, spec.r0, t) - 1.0).abs() < 1e-10, "t = {t}");
    }
}

#[test]
fn pantographic_boundaries() {
    let spec = DomainSpec::default();
    let uniform = UniformDilation { kappa: 0.1 };
    assert!(uniform.is_pantographic());
    assert_eq!(uniform.d_theta(1.0, 3.0), 0.0);
    assert!(!EllipticBoundary::new(spec).is_pantographic());
    assert!(EllipticBoundary::new(DomainSpec { epsilon: 0.0, ..spec }).is_pantographic());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fixed_and_moving_inner_products_agree(
        eps in 0.0f64..0.3, t in 0.0f64..40.0, m1 in -3i32..=3, n1 in 1u32..4, m2 in -3i32..=3, n2 in 1u32..4,
    ) {
        let spec = DomainSpec { epsilon: eps, ..DomainSpec::default() };
        let boundary = EllipticBoundary::new(spec);
        let a = BesselMode::new(m1, n1, &spec).unwrap();
        let b = BesselMode::new(m2, n2, &spec).unwrap();
        let fixed = DiskQuadrature::new(spec.r0, 64, 32).unwrap()
            .integrate(|r, th| a.value(r, th).conj() * b.value(r, th));
        let pa = to_moving(|r, th| a.value(r, th), &boundary, t);
        let pb = to_moving(|r, th| b.value(r, th), &boundary, t);
        let n = 48;
        let dtheta = 2.0 * PI / n as f64;
        let mut moving = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let th = (k as f64 + 0.5) * dtheta;
            let rule = gauss_legendre(64, 0.0, boundary.radius(th, t) * spec.r0).unwrap();
            moving += rule.integrate_complex(|r| pa(r, th).conj() * pb(r, th) * r) * dtheta;
        }
        prop_assert!((fixed - moving).norm() < 1e-10, "{fixed} vs {moving}");
    }

    #[test]
    fn round_trip_is_identity(eps in 0.0f64..0.3, t in 0.0f64..40.0, r in 0.0f64..1.0, th in 0.0f64..6.3) {
        let spec = DomainSpec { epsilon: eps, ..DomainSpec::default() };
        let boundary = EllipticBoundary::new(spec);
        let f = |r: f64, th: f64| Complex64::new(r.cos(), r * th.sin());
        let back = to_fixed(to_moving(f, &boundary, t), &boundary, t);
        prop_assert!((back(r, th) - f(r, th)).norm() < 1e-13);
    }

    #[test]
    fn boundary_is_periodic_and_positive(eps in 0.0f64..0.9, t in 0.0f64..100.0, th in -10.0f64..10.0) {
        let boundary = EllipticBoundary::new(DomainSpec { epsilon: eps, ..DomainSpec::default() });
        let r = boundary.radius(th, t);
        prop_assert!(r > 0.0);
        prop_assert!((boundary.radius(th + 2.0 * PI, t) - r).abs() < 1e-12 * r);
    }

    #[test]
    fn ramp_is_monotone(gamma in 0.01f64..5.0, t in 0.0f64..50.0, dt in 0.0f64..5.0) {
        let spec = DomainSpec { gamma, ..DomainSpec::default() };
        prop_assert_eq!(spec.g(0.0), 0.0);
        prop_assert!(spec.g(t + dt) >= spec.g(t) && spec.g(t) <= 1.0);
    }
}
