mod common;

use tfde_core::norms::{
    energy_case, energy_norm1, norm_full, sigma_threshold, EnergyCase, EnergyWeights,
};
use tfde_core::study::rng::SplitMix64;
use tfde_core::TimeLevel;

fn faces(n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    (1..=n).map(|i| ((i as f64 - 0.5) * h).exp()).collect()
}

fn compatible(rng: &mut SplitMix64, n: usize, alpha: f64) -> TimeLevel {
    let mut v: Vec<f64> = (0..=n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    v[0] = alpha * v[n];
    TimeLevel::new(v)
}

#[test]
fn threshold_regression() {
    let h: f64 = 1.0 / 20.0;
    let tau = h.powf(4.0 / 3.0);
    let got = sigma_threshold(0.5, h, tau, std::f64::consts::E);
    assert!((got - 0.6291896648792096).abs() <= 1e-14, "{got}");
}

/// With `y_0 = alpha y_N`, the energy norm and the trapezoidal norm differ
/// only through the `p1` weight and the boundary term, which gives explicit
/// two-sided bounds.
#[test]
fn energy_norm_is_equivalent_to_trapezoidal_norm() {
    let mut rng = SplitMix64::new(3);
    for (alpha, beta) in [(2.0, 3.0), (1.5, 6.0), (0.5, 1.0 / 3.0), (0.8, 0.1)] {
        for n in [8, 16, 32, 64] {
            let h = 1.0 / n as f64;
            let f = faces(n);
            let w = EnergyWeights::new(&f, h, alpha, beta).unwrap();
            // boundary mass of norm_full relative to the energy boundary term
            let (end_full, end_energy) = match w.case {
                EnergyCase::Direct => (0.5 + 0.5 / (alpha * alpha), w.gamma1),
                EnergyCase::Reflected => (0.5 * alpha * alpha + 0.5, w.gamma1),
            };
            let weight_max = w.delta1 * w.p1_sq.iter().cloned().fold(0.0, f64::max);
            let lower = (1.0f64).min(end_energy / end_full).sqrt();
            let upper = (1.0 + weight_max).max(end_energy / end_full).sqrt();
            for _ in 0..50 {
                let y = compatible(&mut rng, n, alpha);
                let e = energy_norm1(&y, &f, h, alpha, beta).unwrap();
                let ratio = e / norm_full(&y, h);
                assert!(
                    ratio >= lower * (1.0 - 1e-12) && ratio <= upper * (1.0 + 1e-12),
                    "alpha={alpha} beta={beta} n={n}: {ratio} not in [{lower}, {upper}]"
                );
                assert!((w.norm(&y, h) - e).abs() <= 1e-12 * e);
            }
        }
    }
}

#[test]
fn regimes() {
    assert_eq!(energy_case(2.0, 3.0).unwrap(), EnergyCase::Direct);
    assert_eq!(energy_case(0.5, 1.0 / 3.0).unwrap(), EnergyCase::Reflected);
    assert!(energy_case(3.0, 2.0).is_err());
    assert!(energy_case(0.1, 10.0).is_err());
}
