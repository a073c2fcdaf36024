//! Discrete norms, the energy norm that the weighted scheme keeps
//! nonincreasing, the stability threshold on `sigma`, and convergence orders.

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{domain, Error, Result};
use crate::fractional::pow_frac;
use crate::grid::TimeLevel;

/// `sqrt(sum_{i=1}^{N-1} y_i^2 h)`; endpoints are excluded.
pub fn norm0(y: &TimeLevel, h: f64) -> f64 {
    interior_sq(y.values(), h).sqrt()
}

fn interior_sq(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    y[1..n].iter().map(|v| v * v * h).sum()
}

/// Trapezoidal norm `sqrt(h y_0^2 / 2 + h y_N^2 / 2 + ||y||_0^2)`.
pub fn norm_full(y: &TimeLevel, h: f64) -> f64 {
    let v = y.values();
    let n = v.len() - 1;
    (0.5 * h * v[0] * v[0] + 0.5 * h * v[n] * v[n] + interior_sq(v, h)).sqrt()
}

pub fn norm_max(y: &TimeLevel) -> f64 {
    y.max_abs()
}

/// Which form of the energy norm applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyCase {
    /// `beta/alpha >= 1` and `alpha^2 >= 1`.
    Direct,
    /// `beta/alpha <= 1` and `alpha^2 <= 1`; evaluated on the reflected level.
    Reflected,
}

/// `delta_1(alpha, beta) / p1_sq(0)` scaled, and `gamma_1(alpha, beta)`.
fn delta_gamma(alpha: f64, beta: f64, p1_sq_0: f64) -> (f64, f64) {
    (
        (beta / alpha - 1.0) / p1_sq_0,
        (alpha * beta + 1.0) / (2.0 * alpha * alpha),
    )
}

/// `p1^2(x_i) = sum_{s=i}^{N-1} h / a_{s+1}` for `i = 0..N`; `faces[s]` is `a_{s+1}`.
pub fn p1_squared(faces: &[f64], h: f64) -> Vec<f64> {
    let n = faces.len();
    let mut p = vec![0.0; n + 1];
    for i in (0..n).rev() {
        p[i] = p[i + 1] + h / faces[i];
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyWeights {
    /// `p1^2` at nodes `0..=N`, built from the (possibly reflected) faces.
    pub p1_sq: Vec<f64>,
    pub delta1: f64,
    pub gamma1: f64,
    pub case: EnergyCase,
    /// Factor converting `y_0^2` of the original level into the boundary
    /// term: 1 in the direct case, `alpha^{-2}` in the reflected one.
    pub boundary_scale: f64,
}

impl EnergyWeights {
    /// Weights for face coefficients `faces` (`a_1 .. a_N`) and the nonlocal
    /// parameters. Fails when `(beta/alpha - 1)(alpha^2 - 1) < 0`.
    pub fn new(faces: &[f64], h: f64, alpha: f64, beta: f64) -> Result<Self> {
        let case = energy_case(alpha, beta)?;
        match case {
            EnergyCase::Direct => {
                let p1_sq = p1_squared(faces, h);
                let (delta1, gamma1) = delta_gamma(alpha, beta, p1_sq[0]);
                Ok(Self {
                    p1_sq,
                    delta1,
                    gamma1,
                    case,
                    boundary_scale: 1.0,
                })
            }
            EnergyCase::Reflected => {
                let reflected: Vec<f64> = faces.iter().rev().copied().collect();
                let p1_sq = p1_squared(&reflected, h);
                let (delta1, gamma1) = delta_gamma(1.0 / alpha, 1.0 / beta, p1_sq[0]);
                Ok(Self {
                    p1_sq,
                    delta1,
                    gamma1,
                    case,
                    boundary_scale: 1.0 / (alpha * alpha),
                })
            }
        }
    }

    /// `||y||_1`, written directly in the original orientation: in the
    /// reflected case the weight is read as `p1(1 - x)` and the boundary term
    /// uses `alpha^{-2} y_0^2`, which equals `y_N^2` on levels obeying
    /// `y_0 = alpha y_N`.
    pub fn norm(&self, y: &TimeLevel, h: f64) -> f64 {
        let v = y.values();
        let n = v.len() - 1;
        let weighted: f64 = (1..n)
            .map(|i| {
                let w = match self.case {
                    EnergyCase::Direct => self.p1_sq[i],
                    EnergyCase::Reflected => self.p1_sq[n - i],
                };
                w * v[i] * v[i] * h
            })
            .sum();
        (interior_sq(v, h)
            + self.delta1 * weighted
            + self.gamma1 * self.boundary_scale * v[0] * v[0] * h)
            .sqrt()
    }
}

/// Selects the energy-norm case, refusing mixed-sign regimes.
pub fn energy_case(alpha: f64, beta: f64) -> Result<EnergyCase> {
    let ratio = beta / alpha - 1.0;
    let square = alpha * alpha - 1.0;
    let product = ratio * square;
    if product < 0.0 || !product.is_finite() {
        return Err(Error::UndefinedNorm {
            alpha,
            beta,
            product,
        });
    }
    if ratio > 0.0 || square > 0.0 {
        Ok(EnergyCase::Direct)
    } else if ratio < 0.0 || square < 0.0 {
        Ok(EnergyCase::Reflected)
    } else {
        // alpha = beta = +-1: both forms coincide
        Ok(EnergyCase::Direct)
    }
}

/// Direct-form energy norm for parameters in the direct regime, from faces,
/// without any reflection bookkeeping.
fn direct_norm(y: &[f64], faces: &[f64], h: f64, alpha: f64, beta: f64) -> f64 {
    let p = p1_squared(faces, h);
    let (delta1, gamma1) = delta_gamma(alpha, beta, p[0]);
    let n = y.len() - 1;
    let weighted: f64 = (1..n).map(|i| p[i] * y[i] * y[i] * h).sum();
    (interior_sq(y, h) + delta1 * weighted + gamma1 * y[0] * y[0] * h).sqrt()
}

/// Energy norm of `y` for faces `a_1 .. a_N` (`faces[i-1] = a_i`).
///
/// In the reflected regime the level is mirrored, `v_i = y_{N-i}`, the faces
/// become `a_{N-i+1}` and the parameters `(1/alpha, 1/beta)`; the direct form
/// is then evaluated on `v`. This agrees with [`EnergyWeights::norm`] on
/// levels that satisfy `y_0 = alpha y_N`.
pub fn energy_norm1(y: &TimeLevel, faces: &[f64], h: f64, alpha: f64, beta: f64) -> Result<f64> {
    match energy_case(alpha, beta)? {
        EnergyCase::Direct => Ok(direct_norm(y.values(), faces, h, alpha, beta)),
        EnergyCase::Reflected => {
            let v = y.reflected();
            let reflected: Vec<f64> = faces.iter().rev().copied().collect();
            Ok(direct_norm(
                v.values(),
                &reflected,
                h,
                1.0 / alpha,
                1.0 / beta,
            ))
        }
    }
}

/// Lower bound on `sigma` under which the energy norm is nonincreasing:
///
/// ```text
/// 1/(3 - 2^{1-g}) - h^2 (2 - 2^{1-g}) / (2 c2 tau^g (3 - 2^{1-g}) Gamma(2 - g))
/// ```
///
/// Valid for `gamma` in `(0, 1]`; at `gamma = 1` it is `1/2 - h^2/(4 c2 tau)`.
pub fn sigma_threshold(gamma: f64, h: f64, tau: f64, c2: f64) -> f64 {
    let q = pow_frac(2.0, 1.0 - gamma);
    1.0 / (3.0 - q)
        - h * h * (2.0 - q) / (2.0 * c2 * pow_frac(tau, gamma) * (3.0 - q) * gamma_fn(2.0 - gamma))
}

/// Observed order `ln(e_coarse / e_fine) / ln(h_coarse / h_fine)`.
pub fn convergence_order(
    norm_coarse: f64,
    norm_fine: f64,
    h_coarse: f64,
    h_fine: f64,
) -> Result<f64> {
    if !(norm_coarse > 0.0 && norm_fine > 0.0) {
        return Err(domain(
            "norm",
            format!("error norms must be positive, got {norm_coarse} and {norm_fine}"),
        ));
    }
    if !(h_fine > 0.0 && h_coarse > h_fine) {
        return Err(domain(
            "h",
            format!("need h_coarse > h_fine > 0, got {h_coarse} and {h_fine}"),
        ));
    }
    Ok((norm_coarse / norm_fine).ln() / (h_coarse / h_fine).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn faces_exp(n: usize) -> Vec<f64> {
        let h = 1.0 / n as f64;
        (1..=n).map(|i| ((i as f64 - 0.5) * h).exp()).collect()
    }

    /// Level with `y_0 = alpha y_N`, as every computed level satisfies.
    fn compatible(alpha: f64) -> TimeLevel {
        let mut v: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin() + 0.3).collect();
        v[0] = alpha * v[8];
        TimeLevel::new(v)
    }

    #[test]
    fn basic_norms() {
        let zero = TimeLevel::zeros(5);
        assert_eq!(norm0(&zero, 0.25), 0.0);
        assert_eq!(norm_full(&zero, 0.25), 0.0);
        assert_eq!(norm_max(&zero), 0.0);

        let ones = TimeLevel::new(vec![1.0; 5]);
        assert!((norm0(&ones, 0.25) - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((norm_full(&ones, 0.25) - 1.0).abs() < 1e-15);
        assert_eq!(norm_max(&TimeLevel::new(vec![-3.0, 1.0])), 3.0);
    }

    #[test]
    fn norm0_of_identity_approximates_integral() {
        let n = 100;
        let y = TimeLevel::new((0..=n).map(|i| i as f64 / n as f64).collect());
        let h = 1.0 / n as f64;
        // sum_{i<N} (ih)^2 h = 1/3 - h/2 + h^2/6 exactly
        let exact = (1.0 / 3.0 - h / 2.0 + h * h / 6.0).sqrt();
        assert!((norm0(&y, h) - exact).abs() < 1e-14);
        assert!((norm0(&y, h) - (1.0f64 / 3.0).sqrt()).abs() < h);
    }

    #[test]
    fn energy_norm_with_equal_parameters() {
        let faces = faces_exp(8);
        let h = 0.125;
        for alpha in [2.0, 0.5, -3.0] {
            let y = compatible(alpha);
            let e = energy_norm1(&y, &faces, h, alpha, alpha).unwrap();
            let v = y.values();
            let expected = norm0(&y, h).powi(2)
                + (alpha * alpha + 1.0) / (2.0 * alpha * alpha) * v[0] * v[0] * h;
            assert!((e * e - expected).abs() < 1e-14, "alpha = {alpha}");
        }
        let y = compatible(1.0);
        let e = energy_norm1(&y, &faces, h, 1.0, 1.0).unwrap();
        let expected = norm0(&y, h).powi(2) + y[0] * y[0] * h;
        assert!((e * e - expected).abs() < 1e-14);
        assert_eq!(
            energy_norm1(&TimeLevel::zeros(9), &faces, h, 2.0, 3.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn energy_weights_shape() {
        let faces = faces_exp(8);
        let w = EnergyWeights::new(&faces, 0.125, 3.0, 4.0).unwrap();
        assert_eq!(w.case, EnergyCase::Direct);
        assert_eq!(w.p1_sq[8], 0.0);
        assert!(w.p1_sq.windows(2).all(|p| p[0] >= p[1]));
        assert!((w.gamma1 - 13.0 / 18.0).abs() < 1e-15);
        assert!((w.delta1 - (4.0 / 3.0 - 1.0) / w.p1_sq[0]).abs() < 1e-15);
        let r = EnergyWeights::new(&faces, 0.125, 0.5, 0.25).unwrap();
        assert_eq!(r.case, EnergyCase::Reflected);
    }

    #[test]
    fn reflected_case_matches_closed_form() {
        let faces = faces_exp(8);
        let h = 0.125;
        let (alpha, beta) = (0.5, 1.0 / 3.0);
        let y = TimeLevel::new(vec![
            alpha * 0.6,
            -0.7,
            1.1,
            0.05,
            -0.4,
            0.9,
            0.2,
            -1.3,
            0.6,
        ]);
        let via_reflection = energy_norm1(&y, &faces, h, alpha, beta).unwrap();
        let weights = EnergyWeights::new(&faces, h, alpha, beta).unwrap();
        let closed = weights.norm(&y, h);
        assert!((via_reflection - closed).abs() <= 1e-13 * closed);
    }

    #[test]
    fn mixed_regime_is_refused() {
        let faces = faces_exp(4);
        let y = TimeLevel::zeros(5);
        assert!(matches!(
            energy_norm1(&y, &faces, 0.25, 0.1, 10.0),
            Err(Error::UndefinedNorm { .. })
        ));
        assert!(EnergyWeights::new(&faces, 0.25, 2.0, 1.0).is_err());
    }

    #[test]
    fn threshold_limits() {
        let (h, tau, c2) = (0.05, 0.01, E);
        let classical = 0.5 - h * h / (4.0 * c2 * tau);
        assert!((sigma_threshold(1.0, h, tau, c2) - classical).abs() < 1e-14);
        for &g in &[0.1, 0.5, 0.9] {
            let cap = 1.0 / (3.0 - 2f64.powf(1.0 - g));
            let mut prev = f64::NEG_INFINITY;
            for k in 1..10 {
                let h = 0.5f64.powi(k);
                let s = sigma_threshold(g, h, 0.01, c2);
                assert!(s < cap && s > prev);
                prev = s;
            }
            assert!((sigma_threshold(g, 1e-9, 0.01, c2) - cap).abs() < 1e-12);
        }
    }

    #[test]
    fn order_of_exact_power_law() {
        assert_eq!(convergence_order(4.0 * E, E, 0.1, 0.05).unwrap(), 2.0);
        assert!(convergence_order(0.0, 1.0, 0.1, 0.05).is_err());
        assert!(convergence_order(1.0, 1.0, 0.05, 0.1).is_err());
    }
}
