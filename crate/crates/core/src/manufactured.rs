//! Manufactured test problem with exact solution
//! `u(x,t) = S(x) T(t)`, `S(x) = (1-3a)x^3 + a x^2 + a x + a`,
//! `T(t) = t^3 - t^2 + t + 1`, diffusivity `k(x) = e^x`.
//!
//! `S(0) = a` and `S(1) = 1`, so `u(0,t) = alpha u(1,t)` holds for every `t`.
//! The source and the boundary datum are derived from the equation:
//! `f = S D^g T - e^x (S' + S'') T` and `mu = (e (3 - 6a) - beta a) T`.

use std::f64::consts::E;

use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{domain, Error, Result};
use crate::fractional::pow_frac;
use crate::problem::Problem;
use crate::quadrature::caputo_oracle;

/// Spatial profile `S`, its derivatives, and the temporal factor `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub alpha: f64,
}

impl Profile {
    pub fn s(&self, x: f64) -> f64 {
        let a = self.alpha;
        ((1.0 - 3.0 * a) * x + a) * x * x + a * x + a
    }

    pub fn ds(&self, x: f64) -> f64 {
        let a = self.alpha;
        3.0 * (1.0 - 3.0 * a) * x * x + 2.0 * a * x + a
    }

    pub fn d2s(&self, x: f64) -> f64 {
        let a = self.alpha;
        6.0 * (1.0 - 3.0 * a) * x + 2.0 * a
    }
}

pub fn time_factor(t: f64) -> f64 {
    ((t - 1.0) * t + 1.0) * t + 1.0
}

pub fn time_factor_prime(t: f64) -> f64 {
    3.0 * t * t - 2.0 * t + 1.0
}

/// Closed-form Caputo derivative of `T`, from
/// `D^g t^m = Gamma(m+1) t^{m-g} / Gamma(m+1-g)`.
pub fn time_factor_caputo(t: f64, gamma: f64) -> f64 {
    6.0 * pow_frac(t, 3.0 - gamma) / gamma_fn(4.0 - gamma)
        - 2.0 * pow_frac(t, 2.0 - gamma) / gamma_fn(3.0 - gamma)
        + pow_frac(t, 1.0 - gamma) / gamma_fn(2.0 - gamma)
}

#[derive(Debug, Clone)]
pub struct ManufacturedProblem {
    pub problem: Problem,
    pub profile: Profile,
}

impl ManufacturedProblem {
    pub fn exact(&self, x: f64, t: f64) -> f64 {
        self.profile.s(x) * time_factor(t)
    }

    /// `u_x(x, t)`.
    pub fn exact_dx(&self, x: f64, t: f64) -> f64 {
        self.profile.ds(x) * time_factor(t)
    }
}

pub fn build_manufactured(alpha: f64, beta: f64, gamma: f64) -> Result<ManufacturedProblem> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(domain("gamma", format!("{gamma} not in (0, 1)")));
    }
    if !(alpha * beta > 0.0) {
        return Err(domain(
            "alpha*beta",
            format!("alpha={alpha}, beta={beta}: product must be positive"),
        ));
    }
    let profile = Profile { alpha };
    let flux_factor = E * (3.0 - 6.0 * alpha) - beta * alpha;
    let problem = Problem::new(gamma, alpha, beta, f64::exp, 1.0, E)?
        .with_source(move |x, t| {
            profile.s(x) * time_factor_caputo(t, gamma)
                - x.exp() * (profile.ds(x) + profile.d2s(x)) * time_factor(t)
        })
        .with_boundary_datum(move |t| flux_factor * time_factor(t))
        .with_initial(move |x| profile.s(x))
        .with_exact(move |x, t| profile.s(x) * time_factor(t));
    Ok(ManufacturedProblem { problem, profile })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    pub samples: usize,
    pub max_pde_residual: f64,
    pub max_value_coupling_residual: f64,
    pub max_flux_coupling_residual: f64,
}

pub const PDE_RESIDUAL_TOL: f64 = 1e-8;
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Samples `(x, t)` on a fixed low-discrepancy sequence and checks the PDE
/// residual `D^g u - (k u_x)_x - f` (Caputo part by quadrature) and both
/// boundary identities.
pub fn verify_compatibility(mp: &ManufacturedProblem, t_final: f64) -> Result<CompatibilityReport> {
    const SAMPLES: usize = 50;
    let p = &mp.problem;
    let gamma = p.gamma();
    let mut report = CompatibilityReport {
        samples: SAMPLES,
        max_pde_residual: 0.0,
        max_value_coupling_residual: 0.0,
        max_flux_coupling_residual: 0.0,
    };
    // additive recurrence with the golden and plastic ratios
    let (g1, g2) = (0.618_033_988_749_894_9, 0.754_877_666_246_692_7);
    for j in 1..=SAMPLES {
        let x = (j as f64 * g1).fract();
        let t = t_final * (0.01 + 0.99 * (j as f64 * g2).fract());

        let s = mp.profile.s(x);
        let caputo = caputo_oracle(|r| s * time_factor_prime(r), t, gamma)?;
        // (k u_x)_x = e^x (u_x + u_xx) for k = e^x
        let diffusion = p.k(x) * (mp.profile.ds(x) + mp.profile.d2s(x)) * time_factor(t);
        let pde = (caputo - diffusion - p.source(x, t)).abs();
        report.max_pde_residual = report.max_pde_residual.max(pde);
        if pde > PDE_RESIDUAL_TOL {
            return Err(Error::Compatibility {
                identity: "pde",
                residual: pde,
                tolerance: PDE_RESIDUAL_TOL,
                x,
                t,
            });
        }

        let u = |x: f64| {
            p.exact(x, t)
                .expect("manufactured problem has an exact solution")
        };
        let value = (u(0.0) - p.alpha() * u(1.0)).abs();
        report.max_value_coupling_residual = report.max_value_coupling_residual.max(value);
        if value > BOUNDARY_TOL * u(0.0).abs().max(1.0) {
            return Err(Error::Compatibility {
                identity: "value coupling u(0,t) = alpha u(1,t)",
                residual: value,
                tolerance: BOUNDARY_TOL,
                x: 0.0,
                t,
            });
        }

        let flux = p.k(1.0) * mp.exact_dx(1.0, t) - p.beta() * p.k(0.0) * mp.exact_dx(0.0, t);
        let flux_res = (flux - p.mu(t)).abs();
        report.max_flux_coupling_residual = report.max_flux_coupling_residual.max(flux_res);
        if flux_res > BOUNDARY_TOL * flux.abs().max(1.0) {
            return Err(Error::Compatibility {
                identity: "flux coupling k(1)u_x(1,t) = beta k(0)u_x(0,t) + mu(t)",
                residual: flux_res,
                tolerance: BOUNDARY_TOL,
                x: 1.0,
                t,
            });
        }
    }
    Ok(report)
}
