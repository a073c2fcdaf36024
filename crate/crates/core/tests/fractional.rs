mod common;

use common::{identity_check, random_series};
use proptest::prelude::*;
use tfde_core::fractional::{discrete_caputo, kernel_increments, lemma2_terms, split_implicit};
use tfde_core::study::rng::SplitMix64;

proptest! {
    #[test]
    fn energy_identities_hold(
        series in prop::collection::vec(-5.0f64..5.0, 2..40),
        nu in 0.05f64..0.95,
        tau in 1e-3f64..1.0,
    ) {
        let c = identity_check(&series, nu, tau);
        prop_assert!(c.first <= 1e-12, "first identity residual {}", c.first);
        prop_assert!(c.second <= 1e-12, "second identity residual {}", c.second);
        prop_assert!(c.j1 >= -1e-13 && c.j2 >= -1e-13);
    }

    #[test]
    fn operator_is_linear(
        pair in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..30),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        gamma in 0.05f64..0.95,
    ) {
        let tau = 0.05;
        let u: Vec<f64> = pair.iter().map(|p| p.0).collect();
        let w: Vec<f64> = pair.iter().map(|p| p.1).collect();
        let mix: Vec<f64> = pair.iter().map(|p| a * p.0 + b * p.1).collect();
        let lhs = discrete_caputo(&mix, gamma, tau).unwrap();
        let du = discrete_caputo(&u, gamma, tau).unwrap();
        let dw = discrete_caputo(&w, gamma, tau).unwrap();
        let scale = (a * du).abs().max((b * dw).abs()).max(1.0);
        prop_assert!((lhs - a * du - b * dw).abs() <= 1e-13 * scale * pair.len() as f64);
    }

    #[test]
    fn split_reassembles_operator(
        series in prop::collection::vec(-3.0f64..3.0, 2..40),
        gamma in 0.05f64..0.95,
    ) {
        let tau = 0.02;
        let n = series.len() - 1;
        let (c_new, load) = split_implicit(&series[..n], gamma, tau).unwrap();
        let full = discrete_caputo(&series, gamma, tau).unwrap();
        let scale = (c_new * series[n]).abs().max(load.abs()).max(1.0);
        prop_assert!((c_new * series[n] + load - full).abs() <= 1e-12 * scale);
    }
}

#[test]
fn randomized_identity_sweep() {
    let mut rng = SplitMix64::new(99);
    for _ in 0..1000 {
        let (series, nu, tau) = random_series(&mut rng);
        let c = identity_check(&series, nu, tau);
        assert!(
            c.first <= 1e-12 && c.second <= 1e-12,
            "{series:?} nu={nu} tau={tau}"
        );
        assert!(c.j1 >= -1e-13 && c.j2 >= -1e-13);
    }
}

#[test]
fn constant_series_has_zero_remainders() {
    for len in 2..12 {
        let (j1, j2) = lemma2_terms(&vec![1.7; len], 0.4, 0.1).unwrap();
        assert_eq!((j1, j2), (0.0, 0.0));
    }
}

#[test]
fn kernel_second_differences_are_positive() {
    for gamma in [0.1, 0.5, 0.9] {
        let b = kernel_increments(201, gamma);
        for k in 1..=200 {
            assert!(b[k - 1] - b[k] > 0.0, "gamma={gamma} k={k}");
        }
    }
}
