use beurling_core::density::*;
use proptest::prelude::*;

fn two_zero_density() -> TargetDensity {
    TargetDensity::new(0.6, ZeroSpec::new(vec![Zero::new(0.75, 5.0, 1)]).unwrap(), Some(8)).unwrap()
}

/// Composite Simpson on [a, b] with n (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * k as f64);
    }
    acc * h / 3.0
}

#[test]
fn m_min_examples() {
    let four = ZeroSpec::new(vec![Zero::new(0.75, 1.0, 1), Zero::new(0.75, 2.0, 1)]).unwrap();
    assert_eq!(four.total_multiplicity(), 4);
    assert_eq!(m_min(&four).unwrap(), 32);
    assert_eq!(m0_formula(4, 0.75).unwrap(), 32);
    assert_eq!(m0_formula(1, 0.5).unwrap(), 2);
    assert_eq!(m0_formula(2, 0.5).unwrap(), 4);
    assert_eq!(m0_formula(18, 0.75).unwrap(), 648);
    assert!(m0_formula(2, 1.0).is_err());
    assert_eq!(m_min(&ZeroSpec::empty()).unwrap(), 1);
}

#[test]
fn zero_spec_is_conjugate_closed() {
    let s = ZeroSpec::new(vec![Zero::new(0.75, 5.0, 1), Zero::new(0.8, 0.0, 2), Zero::new(0.7, -3.0, 1)]).unwrap();
    let mut ims: Vec<f64> = s.expanded().iter().map(|(r, _)| r.im).collect();
    let mut neg: Vec<f64> = ims.iter().map(|v| -v).collect();
    ims.sort_by(f64::total_cmp);
    neg.sort_by(f64::total_cmp);
    assert_eq!(ims, neg);
    assert_eq!(s.total_multiplicity(), 6);
}

#[test]
fn f0_examples() {
    let d = TargetDensity::new_unchecked(0.5, ZeroSpec::empty(), 0);
    assert!((d.f0(4.0).unwrap() - 8.0).abs() < 1e-14);
    let d = TargetDensity::new(0.6, ZeroSpec::new(vec![Zero::new(0.8, 0.0, 1)]).unwrap(), Some(2)).unwrap();
    let expected = 1.0 + 1.0 / 0.6 + 4.0 - 1.0 / 0.8;
    assert!((d.f0(1.0).unwrap() - expected).abs() < 1e-14);
    assert!((expected - 5.41666).abs() < 1e-5);
}

#[test]
fn f0_prime_nonnegative_at_minimal_m() {
    for spec in [
        ZeroSpec::new(vec![Zero::new(0.75, 5.0, 1)]).unwrap(),
        ZeroSpec::new(vec![Zero::new(0.85, 4.0, 1), Zero::new(0.8, 0.0, 1)]).unwrap(),
        ZeroSpec::new(vec![Zero::new(0.7, 3.0, 2)]).unwrap(),
    ] {
        let d = TargetDensity::new(0.6, spec, None).unwrap();
        for k in 0..=8000 {
            let x = 10f64.powf(8.0 * k as f64 / 8000.0);
            assert!(d.f0_prime(x).unwrap() >= 0.0, "x={x}");
        }
    }
}

#[test]
fn f0_prime_matches_difference_quotient() {
    let d = two_zero_density();
    for x in [1.5, 7.0, 123.0, 1e5] {
        let h = 1e-6 * x;
        let fd = (d.f0(x + h).unwrap() - d.f0(x - h).unwrap()) / (2.0 * h);
        assert!((fd - d.f0_prime(x).unwrap()).abs() < 1e-6 * (1.0 + fd.abs()));
    }
}

#[test]
fn f_at_one_is_zero() {
    assert_eq!(two_zero_density().f_eval(1.0).unwrap(), 0.0);
}

#[test]
fn f_matches_simpson_oracle() {
    let d = TargetDensity::new_unchecked(0.5, ZeroSpec::empty(), 0);
    let integrand = |y: f64| {
        let w = if (y - 1.0).abs() < 1e-12 { 1.0 } else { (1.0 - 1.0 / y) / y.ln() };
        w * (1.0 + y.powf(-0.5))
    };
    let oracle = simpson(integrand, 1.0, 2.0, 20_000);
    assert!((d.f_eval(2.0).unwrap() - oracle).abs() < 1e-10, "{} vs {oracle}", d.f_eval(2.0).unwrap());

    let d = two_zero_density();
    let integrand = |y: f64| {
        let w = if (y - 1.0).abs() < 1e-12 { 1.0 } else { (1.0 - 1.0 / y) / y.ln() };
        w * d.f0_prime(y).unwrap()
    };
    for x in [3.0, 50.0] {
        let oracle = simpson(integrand, 1.0, x, 200_000);
        assert!((d.f_eval(x).unwrap() - oracle).abs() < 1e-9 * oracle.max(1.0));
    }
}

#[test]
fn f_is_monotone_and_inverse_round_trips() {
    let d = two_zero_density();
    let mut prev = 0.0;
    for k in 1..400 {
        let x = 10f64.powf(7.0 * k as f64 / 400.0);
        let f = d.f_eval(x).unwrap();
        assert!(f >= prev);
        prev = f;
        let back = d.inverse_f(f).unwrap();
        // Solver tolerance plus the conditioning limit ulp(F)/F'(x).
        let slope = d.log_density(back.ln()) / back;
        let tol = 1e-9f64.max(2.0 * f64::EPSILON * back) + 8.0 * f64::EPSILON * f / slope;
        assert!(d.f_eval(back - tol).unwrap() <= f && f <= d.f_eval(back + tol).unwrap(), "x={x} back={back}");
        assert!((back - x).abs() <= 1e-8 * x.max(1.0));
    }
}

#[test]
fn nested_values_consistent_with_quadrature() {
    let d = two_zero_density();
    let integrand = |y: f64| (1.0 - 1.0 / y) / y.ln() * d.f0_prime(y).unwrap();
    for (x1, x2) in [(2.0, 3.0), (10.0, 17.5), (1000.0, 1010.0), (5e5, 5.0001e5)] {
        let oracle = simpson(integrand, x1, x2, 20_000);
        let diff = d.f_eval(x2).unwrap() - d.f_eval(x1).unwrap();
        assert!((diff - oracle).abs() < 1e-9, "[{x1}, {x2}]: {diff} vs {oracle}");
    }
}

#[test]
fn chebyshev_bound_on_log_grid() {
    let d = two_zero_density();
    let c = d.chebyshev_constant(2.0, 1e8, 400).unwrap();
    assert!(c.is_finite() && c > 0.0);
    for k in 0..=400 {
        let x = 2.0 * (5e7f64).powf(k as f64 / 400.0);
        assert!(d.f_eval(x).unwrap() * x.ln() / x <= c * (1.0 + 1e-12));
    }
}

#[test]
fn f0_over_x_tends_to_one() {
    let d = two_zero_density();
    let rho = num_complex::Complex64::new(0.75, 5.0);
    for k in 0..=80 {
        let x = 10f64.powf(k as f64 / 10.0);
        let bound = x.powf(d.r() - 1.0) / d.r() + 2.0 * f64::from(d.m()) * x.powf(-0.5) + 2.0 * x.powf(-0.25) / rho.norm();
        assert!((d.f0(x).unwrap() / x - 1.0).abs() <= bound + 1e-14);
    }
}

#[test]
fn theta_model_matches_quadrature() {
    let d = two_zero_density();
    let integrand = |y: f64| {
        let w = if (y - 1.0).abs() < 1e-12 { 1.0 } else { (1.0 - 1.0 / y) / y.ln() };
        y.ln() * w * d.f0_prime(y).unwrap()
    };
    for y in [2.0, 10.0, 300.0] {
        let oracle = simpson(integrand, 1.0, y, 200_000);
        assert!((d.theta_model(y).unwrap() - oracle).abs() < 1e-8 * oracle.max(1.0));
    }
}

#[test]
fn twisted_mass_at_zero_frequency_is_f() {
    let d = two_zero_density();
    let j = d.twisted_mass(40.0, 0.0).unwrap();
    assert!((j.re - d.f_eval(40.0).unwrap()).abs() < 1e-10);
    assert!(j.im.abs() < 1e-14);
}

#[test]
fn validation_errors() {
    let s = ZeroSpec::new(vec![Zero::new(0.75, 5.0, 1)]).unwrap();
    assert!(TargetDensity::new(0.4, s.clone(), None).is_err());
    assert!(TargetDensity::new(1.0, s.clone(), None).is_err());
    assert!(TargetDensity::new(0.8, s.clone(), None).is_err());
    assert!(TargetDensity::new(0.6, s.clone(), Some(1)).is_err());
    assert!(ZeroSpec::new(vec![Zero::new(1.0, 1.0, 1)]).is_err());
    assert!(ZeroSpec::new(vec![Zero::new(0.7, 1.0, 0)]).is_err());
    let d = TargetDensity::new_unchecked(0.6, ZeroSpec::empty(), 0);
    assert!(d.f_eval(0.5).is_err());
}

#[test]
fn fingerprint_depends_on_parameters() {
    let a = two_zero_density();
    let b = two_zero_density();
    let c = TargetDensity::new(0.6, ZeroSpec::new(vec![Zero::new(0.75, 5.0, 1)]).unwrap(), Some(9)).unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_ne!(a.fingerprint(), c.fingerprint());
}

#[test]
fn linear_density_is_exact() {
    let d = LinearDensity { slope: 2.0 };
    assert_eq!(d.cdf(3.0).unwrap(), 4.0);
    assert_eq!(d.quantile(4.0).unwrap(), 3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quantile_inverts_cdf(level in 0.01f64..5e4) {
        let d = two_zero_density();
        let x = d.quantile(level).unwrap();
        let back = d.cdf(x).unwrap();
        prop_assert!((back - level).abs() <= 1e-8 * level.max(1.0), "level {} back {}", level, back);
    }

    #[test]
    fn cdf_monotone(a in 1.0f64..1e6, b in 1.0f64..1e6) {
        let d = two_zero_density();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(d.cdf(lo).unwrap() <= d.cdf(hi).unwrap());
    }
}
