use std::f64::consts::{FRAC_PI_2, PI};

use beurling_core::sine_polynomial::*;
use beurling_core::Error;
use proptest::prelude::*;

/// Independent oracle: plain maximum of |S| over an equispaced grid on [0, π/2].
fn grid_max(indices: &[u32], points: usize) -> f64 {
    (0..points)
        .map(|j| {
            let y = FRAC_PI_2 * j as f64 / (points - 1) as f64;
            let s: f64 = indices.iter().map(|&n| ((2 * n + 1) as f64 * y).sin() / (2 * n + 1) as f64).sum();
            (2.0 * s).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn eval_examples() {
    let p = SinePolynomial::new(vec![0]).unwrap();
    assert!((p.eval(FRAC_PI_2) - 2.0).abs() < 1e-15);
    assert_eq!(p.eval(0.0), 0.0);
    let p = SinePolynomial::new(vec![0, 1, 2]).unwrap();
    assert!((p.eval(FRAC_PI_2) - 2.0 * (1.0 - 1.0 / 3.0 + 1.0 / 5.0)).abs() < 1e-15);
    assert!((p.eval(FRAC_PI_2) - 1.7333).abs() < 1e-4);
}

#[test]
fn sup_norm_single_term() {
    let mut p = SinePolynomial::new(vec![0]).unwrap();
    let grid = p.min_grid();
    assert!((p.sup_norm(grid).unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(p.certified_norm(), Some(p.certify(grid).unwrap()));
}

#[test]
fn sup_norm_two_terms_matches_fine_grid() {
    let mut p = SinePolynomial::new(vec![0, 1]).unwrap();
    let v = p.sup_norm(4 * p.min_grid()).unwrap();
    let oracle = grid_max(&[0, 1], 1_000_001);
    assert!((v - oracle).abs() < 1e-10, "{v} vs {oracle}");
    // Analytic maximum at y = π/4.
    assert!((v - 2.0 * (0.5f64.sqrt() + 0.5f64.sqrt() / 3.0)).abs() < 1e-12);
}

#[test]
fn consecutive_500_terms_near_gibbs_constant() {
    let v = gibbs_norm(500).unwrap();
    assert!((v - 1.8519).abs() < 0.02, "{v}");
}

#[test]
fn gibbs_trend_decreasing_above_half_pi() {
    let values: Vec<f64> = [10, 50, 200, 500].iter().map(|&n| gibbs_norm(n).unwrap()).collect();
    for w in values.windows(2) {
        assert!(w[1] < w[0], "{values:?}");
    }
    for v in &values {
        assert!(*v > 1.8519, "{values:?}");
    }
}

#[test]
fn coarse_grid_refused() {
    let p = SinePolynomial::consecutive(10);
    let err = p.certify(p.min_grid() - 1).unwrap_err();
    assert!(matches!(err, Error::GridTooCoarse(_)));
}

#[test]
fn invalid_indices_refused() {
    assert!(SinePolynomial::new(vec![]).is_err());
    assert!(SinePolynomial::new(vec![1, 1]).is_err());
    assert!(SinePolynomial::new(vec![2, 1]).is_err());
}

#[test]
fn smooth_index_examples() {
    assert_eq!(smooth_index_polynomial(3, 13).unwrap().indices(), &[0, 1, 4, 13]);
    assert_eq!(smooth_index_polynomial(3, 1).unwrap().indices(), &[0, 1]);
    assert_eq!(smooth_index_polynomial(5, 7).unwrap().indices(), &[0, 1, 2, 4, 7]);
    assert!(smooth_index_polynomial(2, 7).is_err());
}

#[test]
fn smooth_index_matches_trial_division_oracle() {
    for (p, n) in [(7u64, 100u32), (11, 300), (13, 57)] {
        let expected: Vec<u32> = (0..=n)
            .filter(|&k| {
                let mut m = 2 * u64::from(k) + 1;
                for q in 2..=p {
                    while m % q == 0 {
                        m /= q;
                    }
                }
                m == 1
            })
            .collect();
        assert_eq!(smooth_index_polynomial(p as u32, n).unwrap().indices(), expected.as_slice());
    }
}

#[test]
fn search_zero_budget_fails() {
    let out = search_low_norm(0.45, SearchStrategy::Smooth, 1, 0).unwrap();
    assert!(!out.is_success());
    match out {
        SearchOutcome::Failure { target, evaluations, .. } => {
            assert_eq!(evaluations, 0);
            assert!((target - (FRAC_PI_2 + 0.45)).abs() < 1e-15);
        }
        _ => unreachable!(),
    }
}

#[test]
fn search_smooth_reaches_loose_target() {
    let out = search_low_norm(0.45, SearchStrategy::Smooth, 1, 10_000).unwrap();
    let p = out.polynomial().expect("success").clone();
    assert!(out.is_success());
    let norm = p.certified_norm().unwrap();
    assert!(norm <= FRAC_PI_2 + 0.45);
    assert!((p.certify(p.certification_grid()).unwrap() - norm).abs() < 1e-12);
    assert!(grid_max(p.indices(), 200_001) <= norm + 1e-9);
}

#[test]
fn search_anneal_reaches_quarter_target() {
    let out = search_low_norm(0.25, SearchStrategy::Anneal, 11, 200_000).unwrap();
    assert!(out.is_success(), "{out:?}");
    let p = out.polynomial().unwrap();
    assert!(p.certified_norm().unwrap() <= FRAC_PI_2 + 0.25);
    assert!(grid_max(p.indices(), 400_001) <= p.certified_norm().unwrap() + 1e-9);
}

#[test]
fn search_is_deterministic_per_seed() {
    let a = search_low_norm(0.3, SearchStrategy::Anneal, 5, 300).unwrap();
    let b = search_low_norm(0.3, SearchStrategy::Anneal, 5, 300).unwrap();
    assert_eq!(a.polynomial().map(|p| p.indices().to_vec()), b.polynomial().map(|p| p.indices().to_vec()));
}

#[test]
fn record_round_trip() {
    let mut p = SinePolynomial::new(vec![0, 1, 4, 13]).unwrap();
    p.sup_norm(4 * p.min_grid()).unwrap();
    let q: SinePolynomial = p.to_record().parse().unwrap();
    assert_eq!(p, q);
    let fresh: SinePolynomial = "indices=0,2; norm=none; grid=0".parse().unwrap();
    assert_eq!(fresh.certified_norm(), None);
    assert!("indices=0;bogus=1".parse::<SinePolynomial>().is_err());
}

#[test]
fn strategy_names() {
    for s in [SearchStrategy::Smooth, SearchStrategy::Anneal] {
        assert_eq!(s.to_string().parse::<SearchStrategy>().unwrap(), s);
    }
    assert!("greedy".parse::<SearchStrategy>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn odd_symmetry(mut idx in proptest::collection::btree_set(1u32..40, 0..8), y in -PI..PI) {
        idx.insert(0);
        let p = SinePolynomial::new(idx.into_iter().collect()).unwrap();
        prop_assert!((p.eval(-y) + p.eval(y)).abs() < 1e-13);
        prop_assert!((p.eval(PI - y) - p.eval(y)).abs() < 1e-12);
    }

    #[test]
    fn certified_norm_dominates_grid(mut idx in proptest::collection::btree_set(1u32..30, 0..6)) {
        idx.insert(0);
        let indices: Vec<u32> = idx.into_iter().collect();
        let p = SinePolynomial::new(indices.clone()).unwrap();
        let norm = p.certify(p.min_grid()).unwrap();
        prop_assert!(grid_max(&indices, 20_001) <= norm + 1e-9);
        prop_assert!(norm <= 2.0 * indices.iter().map(|&n| 1.0 / (2 * n + 1) as f64).sum::<f64>() + 1e-12);
    }
}
