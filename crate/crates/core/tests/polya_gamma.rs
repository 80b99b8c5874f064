mod support;

use regshrink::{pg_mean, sample_pg1};
use support::*;

/// Var PG(1, c) = (sinh c - c) / (4 c^3 cosh^2(c/2)), 1/24 at c = 0.
fn pg_variance(c: f64) -> f64 {
    if c.abs() < 1e-3 {
        return 1.0 / 24.0 - c * c / 240.0;
    }
    (c.sinh() - c) / (4.0 * c.powi(3) * (0.5 * c).cosh().powi(2))
}

#[test]
fn mean_formula_values() {
    assert!((pg_mean(0.0) - 0.25).abs() < 1e-15);
    assert!((pg_mean(2.0) - 1f64.tanh() / 4.0).abs() < 1e-15);
    assert!((pg_mean(-3.0) - pg_mean(3.0)).abs() < 1e-15);
    assert!((pg_mean(1e-9) - 0.25).abs() < 1e-12);
}

#[test]
fn draws_match_mean_and_variance() {
    let mut r = rng(21);
    for c in [0.0, 0.5, 2.0, 8.0] {
        let d: Vec<f64> = (0..100_000).map(|_| sample_pg1(c, &mut r)).collect();
        let (m, se) = mean_se(&d);
        assert!((m - pg_mean(c)).abs() < 4.0 * se, "c={c}: {m} vs {}", pg_mean(c));
        let v = variance(&d);
        assert!((v / pg_variance(c) - 1.0).abs() < 0.05, "c={c}: var {v} vs {}", pg_variance(c));
        assert!(d.iter().all(|&x| x > 0.0 && x.is_finite()));
    }
}

#[test]
fn negated_tilt_gives_same_law() {
    let mut r1 = rng(22);
    let mut r2 = rng(23);
    let a: Vec<f64> = (0..40_000).map(|_| sample_pg1(1.5, &mut r1)).collect();
    let b: Vec<f64> = (0..40_000).map(|_| sample_pg1(-1.5, &mut r2)).collect();
    assert!(ks_two_sample(&a, &b) < 0.015);
}

#[test]
fn mean_cv_across_seeds_is_small() {
    let means: Vec<f64> = (0..20)
        .map(|s| {
            let mut r = rng(100 + s);
            mean(&(0..5_000).map(|_| sample_pg1(1.0, &mut r)).collect::<Vec<_>>())
        })
        .collect();
    let cv = variance(&means).sqrt() / mean(&means);
    assert!(cv < 0.02, "cv {cv}");
}

#[test]
fn large_tilt_is_stable() {
    let mut r = rng(24);
    let d: Vec<f64> = (0..50_000).map(|_| sample_pg1(100.0, &mut r)).collect();
    let (m, se) = mean_se(&d);
    assert!((m - pg_mean(100.0)).abs() < 4.0 * se, "{m} vs {}", pg_mean(100.0));
}
