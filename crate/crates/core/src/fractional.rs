//! L1 discretisation of the Caputo derivative and the discrete energy
//! identities it satisfies.
//!
//! On the uniform time mesh `t_j = j tau` the operator at `t_{n+1}` is
//!
//! ```text
//! D y = sum_{s=0}^{n} (t_{n-s+1}^{1-g} - t_{n-s}^{1-g}) (y^{s+1} - y^s) / (tau Gamma(2-g))
//! ```
//!
//! Every weight depends on `n - s` only, so the increments
//! `b_j = (j+1)^{1-g} - j^{1-g}` are shared by all time levels.

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{domain, Result};

/// `t^p` through `exp(p ln t)`, with `0^p = 0`.
pub(crate) fn pow_frac(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        (p * t.ln()).exp()
    }
}

fn check_order(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain("gamma", format!("{gamma} not in (0, 1)")));
    }
    Ok(())
}

/// Increments `b_j = (j+1)^{1-gamma} - j^{1-gamma}`, `j = 0..len`.
///
/// Decreasing in `j`, with `b_0 = 1`.
pub fn kernel_increments(len: usize, gamma: f64) -> Vec<f64> {
    let p = 1.0 - gamma;
    (0..len)
        .map(|j| pow_frac((j + 1) as f64, p) - pow_frac(j as f64, p))
        .collect()
}

/// Coefficients of the L1 operator at `t_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    n: usize,
    gamma: f64,
    tau: f64,
    c: Vec<f64>,
}

impl L1Weights {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `c_s` for `s = 0..=n`; the last entry weights the newest increment.
    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    /// `c_n = tau^{-gamma} / Gamma(2 - gamma)`.
    pub fn newest(&self) -> f64 {
        self.c[self.n]
    }
}

/// `c_s = (t_{n-s+1}^{1-g} - t_{n-s}^{1-g}) / (tau Gamma(2-g))`, `s = 0..=n`.
pub fn l1_weights(n: usize, gamma: f64, tau: f64) -> Result<L1Weights> {
    check_order(gamma)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(domain("tau", format!("{tau} must be positive")));
    }
    let scale = implicit_coefficient(gamma, tau);
    let b = kernel_increments(n + 1, gamma);
    let c = (0..=n).map(|s| scale * b[n - s]).collect();
    Ok(L1Weights { n, gamma, tau, c })
}

/// Weight of the unknown newest level, `tau^{-gamma} / Gamma(2 - gamma)`.
pub fn implicit_coefficient(gamma: f64, tau: f64) -> f64 {
    pow_frac(tau, -gamma) / gamma_fn(2.0 - gamma)
}

/// L1 approximation of the Caputo derivative of `series[0..=n+1]` at `t_{n+1}`.
///
/// # Panics
///
/// Panics if the series holds fewer than two values.
pub fn discrete_caputo(series: &[f64], gamma: f64, tau: f64) -> Result<f64> {
    assert!(series.len() >= 2, "need at least two time levels");
    check_order(gamma)?;
    let n = series.len() - 2;
    let b = kernel_increments(n + 1, gamma);
    let sum: f64 = series
        .windows(2)
        .enumerate()
        .map(|(s, w)| b[n - s] * (w[1] - w[0]))
        .sum();
    Ok(implicit_coefficient(gamma, tau) * sum)
}

/// Splits the L1 operator at `t_{n+1}` as `c_new * y^{n+1} + load`, where
/// `load` uses only the known levels `series[0..=n]`.
///
/// # Panics
///
/// Panics on an empty series.
pub fn split_implicit(series: &[f64], gamma: f64, tau: f64) -> Result<(f64, f64)> {
    assert!(!series.is_empty(), "need at least one time level");
    check_order(gamma)?;
    let n = series.len() - 1;
    let c_new = implicit_coefficient(gamma, tau);
    let b = kernel_increments(n + 1, gamma);
    let history: f64 = series
        .windows(2)
        .enumerate()
        .map(|(s, w)| b[n - s] * (w[1] - w[0]))
        .sum();
    Ok((c_new, c_new * (history - series[n])))
}

/// Remainder terms `(J1, J2)` of the two discrete energy identities
///
/// ```text
/// y^{n+1} D y = D(y^2)/2 + tau^nu Gamma(2-nu)/2 (D y)^2 + J1
/// y^n     D y = D(y^2)/2 - tau^nu Gamma(2-nu)/(2(2-2^{1-nu})) (D y)^2 + J2
/// ```
///
/// evaluated from the partial sums `zeta^{k+1} = sum_{s<=k} d_{n-s} y_t^s`,
/// `d_m = t_{m+1}^{1-nu} - t_m^{1-nu}`. Both are sums of squares with
/// nonnegative weights.
pub fn lemma2_terms(series: &[f64], nu: f64, tau: f64) -> Result<(f64, f64)> {
    assert!(series.len() >= 2, "need at least two time levels");
    check_order(nu)?;
    let n = series.len() - 2;
    let p = 1.0 - nu;
    let step = pow_frac(tau, p);
    let d: Vec<f64> = kernel_increments(n + 1, nu)
        .into_iter()
        .map(|b| step * b)
        .collect();
    // zeta[k] holds zeta^k, k = 0..=n+1
    let mut zeta = vec![0.0; n + 2];
    for s in 0..=n {
        let y_t = (series[s + 1] - series[s]) / tau;
        zeta[s + 1] = zeta[s] + d[n - s] * y_t;
    }
    let g = gamma_fn(2.0 - nu);
    let tail = |upper: usize| -> f64 {
        (0..upper)
            .map(|k| tau * (1.0 / d[n - k] - 1.0 / d[n - k - 1]) * zeta[k + 1] * zeta[k + 1])
            .sum::<f64>()
            / (2.0 * g)
    };
    let j1 = tail(n);
    let q = pow_frac(2.0, p);
    let ratio = (2.0 - q) / (q - 1.0);
    let lead = zeta[n + 1] + ratio * zeta[n];
    let j2 = pow_frac(tau, nu) * (q - 1.0) / (2.0 * g * (2.0 - q)) * lead * lead
        + tail(n.saturating_sub(1));
    Ok((j1, j2))
}
