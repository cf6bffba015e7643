use billiard_core::specfun::{basis, bessel_j, bessel_j_prime, bessel_zero, gauss_legendre, BesselMode, DiskQuadrature};
use billiard_core::DomainSpec;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

/// `J_m(x)` from `terms` terms of the power series, summed in exact rational
/// arithmetic at the exact value of `x`.
fn rational_series(m: u32, x: f64, terms: u32) -> (f64, BigRational) {
    let half = BigRational::from_float(x).unwrap() / BigRational::from_integer(BigInt::from(2));
    let half_sq = &half * &half;
    let mut term = BigRational::one();
    for k in 1..=m {
        term = term * &half / BigRational::from_integer(BigInt::from(k));
    }
    let mut sum = BigRational::zero();
    for k in 1..=terms {
        sum += &term;
        term = -term * &half_sq / BigRational::from_integer(BigInt::from(k * (k + m)));
    }
    (sum.to_f64().unwrap(), term.abs())
}

fn exact_bessel(m: u32, x: f64) -> f64 {
    let (value, tail) = rational_series(m, x, 90);
    assert!(tail < BigRational::new(BigInt::one(), BigInt::from(10).pow(40)));
    value
}

/// 40-term series in double precision, accurate to about 1e-12 for x ≤ 12.
fn series40(m: u32, x: f64) -> f64 {
    let mut term = (1..=m).fold(1.0, |a, k| a * 0.5 * x / f64::from(k));
    let mut sum = 0.0;
    for k in 1..=40u32 {
        sum += term;
        term *= -0.25 * x * x / f64::from(k * (k + m));
    }
    sum
}

/// Bisection between sign changes of the 40-term series.
fn bisected_zero(m: u32, n: u32) -> f64 {
    let mut a = 0.1;
    let mut seen = 0;
    loop {
        let b = a + 0.1;
        if series40(m, a) * series40(m, b) < 0.0 {
            seen += 1;
            if seen == n {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if series40(m, lo) * series40(m, mid) <= 0.0 {
                        hi = mid
                    } else {
                        lo = mid
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
    }
}

#[test]
fn bessel_matches_exact_rational_series() {
    for m in 0..=8u32 {
        for p in 0..=96i64 {
            let x = p as f64 / 8.0;
            let expect = exact_bessel(m, x);
            let got = bessel_j(m, x).unwrap();
            assert!((got - expect).abs() <= 1e-13, "J_{m}({x}) = {got}, exact {expect}");
        }
    }
}

#[test]
fn bessel_origin_values() {
    assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
    assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-12);
}

#[test]
fn zeros_match_the_bisection_oracle() {
    for (m, n, value) in [(0, 1, 2.404825557695773), (1, 1, 3.831705970207512), (0, 2, 5.520078110286311)] {
        let oracle = bisected_zero(m, n);
        assert!((oracle - value).abs() < 1e-12);
        assert!((bessel_zero(m, n).unwrap() - oracle).abs() < 1e-12, "a_{m},{n}");
    }
    // every zero below 12, where the double-precision series is still accurate
    for m in 0..=5 {
        for n in 1..=3 {
            let z = bessel_zero(m, n).unwrap();
            if z < 12.0 {
                assert!((z - bisected_zero(m, n)).abs() < 1e-11, "a_{m},{n}");
            }
        }
    }
}

#[test]
fn zeros_interlace() {
    for m in 0..7u32 {
        for n in 1..10u32 {
            let here = bessel_zero(m, n).unwrap();
            let right = bessel_zero(m + 1, n).unwrap();
            let up = bessel_zero(m, n + 1).unwrap();
            assert!(here < right && right < up, "m={m} n={n}");
            assert!(bessel_j(m, here).unwrap().abs() <= 1e-12);
        }
    }
}

#[test]
fn mode_examples() {
    let spec = DomainSpec::default();
    let ground = BesselMode::new(0, 1, &spec).unwrap();
    assert!((ground.energy - 2.404825557695773f64.powi(2) / 2.0).abs() < 1e-12);
    assert!((ground.energy - 2.891592981).abs() < 1e-8);

    let plus = BesselMode::new(3, 2, &spec).unwrap();
    let minus = BesselMode::new(-3, 2, &spec).unwrap();
    assert_eq!((plus.zero, plus.k, plus.energy, plus.norm), (minus.zero, minus.k, minus.energy, minus.norm));

    let wide = BesselMode::new(0, 1, &DomainSpec { r0: 2.0, ..spec }).unwrap();
    assert!((wide.k - ground.k / 2.0).abs() < 1e-14);
    assert!((wide.energy - ground.energy / 4.0).abs() < 1e-14);
}

#[test]
fn normalization_agrees_with_closed_form() {
    // A = sqrt(2) / (r0 |J_{|m|+1}(a)|)
    for r0 in [1.0, 1.7] {
        let spec = DomainSpec { r0, ..DomainSpec::default() };
        for m in 0..4i32 {
            for n in 1..4 {
                let mode = BesselMode::new(m, n, &spec).unwrap();
                let closed = 2f64.sqrt() / (r0 * bessel_j(m as u32 + 1, mode.zero).unwrap().abs());
                assert!((mode.norm - closed).abs() < 1e-11 * closed, "({m},{n}) r0={r0}");
            }
        }
    }
}

#[test]
fn eigenmode_examples() {
    let spec = DomainSpec::default();
    let quad = DiskQuadrature::standard(spec.r0);
    let a = BesselMode::new(0, 1, &spec).unwrap();
    let b = BesselMode::new(0, 2, &spec).unwrap();
    let c = BesselMode::new(1, 1, &spec).unwrap();
    for th in [0.0, 1.0, 4.0] {
        assert!(a.value(spec.r0, th).norm() < 1e-12);
    }
    assert!(quad.integrate(|r, th| a.value(r, th).conj() * b.value(r, th)).norm() < 1e-10);
    assert!((quad.integrate(|r, th| c.value(r, th).norm_sqr().into()).re - 1.0).abs() < 1e-10);
}

#[test]
fn derivative_matches_recurrence() {
    for m in 0..5u32 {
        for x in [0.3, 2.0, 7.5, 15.0] {
            let expect = if m == 0 {
                -bessel_j(1, x).unwrap()
            } else {
                0.5 * (bessel_j(m - 1, x).unwrap() - bessel_j(m + 1, x).unwrap())
            };
            assert!((bessel_j_prime(m, x).unwrap() - expect).abs() < 1e-13);
        }
    }
}

#[test]
fn gram_matrix_of_default_basis() {
    let spec = DomainSpec::default();
    let modes = basis(5, 8, &spec).unwrap();
    assert_eq!(modes.len(), 88);
    let quad = DiskQuadrature::standard(spec.r0);
    let tables: Vec<Vec<Complex64>> = modes
        .iter()
        .map(|a| {
            let mut v = Vec::new();
            for (&r, &w) in quad.radial.nodes.iter().zip(&quad.weights) {
                v.extend(quad.thetas.iter().map(|&th| a.value(r, th) * w.sqrt()));
            }
            v
        })
        .collect();
    for i in 0..modes.len() {
        for j in i..modes.len() {
            let g: Complex64 = tables[i].iter().zip(&tables[j]).map(|(x, y)| x.conj() * y).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((g - expect).norm() < 1e-10, "{:?} {:?} {g}", (modes[i].m, modes[i].n), (modes[j].m, modes[j].n));
        }
    }
}

#[test]
fn quadrature_examples() {
    let one = gauss_legendre(1, -1.0, 1.0).unwrap();
    assert_eq!((one.nodes[0], one.weights[0]), (0.0, 2.0));
    let two = gauss_legendre(2, -1.0, 1.0).unwrap();
    let node = 3f64.sqrt().recip();
    assert!((two.nodes[0] + node).abs() < 1e-15 && (two.nodes[1] - node).abs() < 1e-15);
    assert!((two.weights[0] - 1.0).abs() < 1e-15 && (two.weights[1] - 1.0).abs() < 1e-15);
    let sixteen = gauss_legendre(16, 0.0, 1.0).unwrap();
    assert!((sixteen.integrate(|x| x.powi(7)) - 0.125).abs() < 1e-14);
    assert!(gauss_legendre(0, 0.0, 1.0).is_err());
    assert!(gauss_legendre(4, 1.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bessel_matches_forty_term_series(m in 0u32..8, x in 0.0f64..12.0) {
        let (exact, _) = rational_series(m, x, 40);
        prop_assert!((bessel_j(m, x).unwrap() - exact).abs() <= 1e-13);
    }

    #[test]
    fn gauss_rules_are_exact_on_polynomials(n in 1usize..40, a in -3.0f64..3.0, width in 0.1f64..4.0, degree_frac in 0.0f64..1.0) {
        let b = a + width;
        let degree = ((2 * n - 1) as f64 * degree_frac).floor() as i32;
        let rule = gauss_legendre(n, a, b).unwrap();
        let sum: f64 = rule.weights.iter().sum();
        prop_assert!((sum - width).abs() <= 1e-13 * width);
        let exact = (b.powi(degree + 1) - a.powi(degree + 1)) / f64::from(degree + 1);
        let scale = a.abs().max(b.abs()).powi(degree + 1).max(1.0);
        prop_assert!((rule.integrate(|x| x.powi(degree)) - exact).abs() <= 1e-12 * scale);
    }

    #[test]
    fn zeros_increase_and_are_roots(m in 0u32..10, n in 1u32..12) {
        let z = bessel_zero(m, n).unwrap();
        prop_assert!(z > 0.0 && bessel_zero(m, n + 1).unwrap() > z);
        prop_assert!(bessel_j(m, z).unwrap().abs() <= 1e-12);
    }
}
