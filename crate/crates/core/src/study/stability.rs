//! Energy-norm decay runs for homogeneous data from a seeded random start.

use std::f64::consts::E;
use std::fmt::Write as _;

use crate::error::Result;
use crate::grid::{Grid, SchemeParams, TimeLevel};
use crate::norms::{energy_case, energy_norm1, sigma_threshold, EnergyCase};
use crate::problem::{face_coefficients, Problem};
use crate::stepper::{march_from, MarchOptions};

use super::rng::SplitMix64;

/// Relative slack allowed on `||y^n||_1 <= ||y^0||_1`.
pub const DECAY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaChoice {
    Value(f64),
    /// `max(0, sigma_threshold)`.
    Threshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRequest {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: SigmaChoice,
    pub n: usize,
    pub nt: usize,
    pub t_final: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub request: StabilityRequest,
    pub case: EnergyCase,
    pub sigma: f64,
    pub threshold: f64,
    /// `||y^n||_1` for every computed level.
    pub norms: Vec<f64>,
    pub passed: bool,
}

impl StabilityReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,energy_norm\n");
        for (n, v) in self.norms.iter().enumerate() {
            let _ = writeln!(out, "{n},{v:.16e}");
        }
        out
    }

    pub fn summary(&self) -> String {
        let r = &self.request;
        format!(
            "gamma={} alpha={} beta={} N={} Nt={} seed={} case={:?}\nsigma={} threshold={:.6e}\n||y^0||_1={:.6e} max_n ||y^n||_1={:.6e}\n{}\n",
            r.gamma,
            r.alpha,
            r.beta,
            r.n,
            r.nt,
            r.seed,
            self.case,
            self.sigma,
            self.threshold,
            self.norms[0],
            self.norms.iter().cloned().fold(0.0, f64::max),
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Seeded initial level: `y_1 .. y_N` uniform on `[-1, 1)` drawn in order,
/// then `y_0 = alpha y_N`.
pub fn random_initial(n: usize, alpha: f64, seed: u64) -> TimeLevel {
    let mut rng = SplitMix64::new(seed);
    let mut values = vec![0.0; n + 1];
    for v in values.iter_mut().skip(1) {
        *v = rng.uniform(-1.0, 1.0);
    }
    values[0] = alpha * values[n];
    TimeLevel::new(values)
}

/// Marches homogeneous data (`f = 0`, `mu = 0`, `k = e^x`) and checks that
/// the energy norm never exceeds its initial value.
pub fn cmd_stability(request: &StabilityRequest) -> Result<StabilityReport> {
    let case = energy_case(request.alpha, request.beta)?;
    let problem = Problem::new(request.gamma, request.alpha, request.beta, f64::exp, 1.0, E)?;
    let grid = Grid::new(request.n, request.nt, request.t_final)?;
    let threshold = sigma_threshold(request.gamma, grid.h(), grid.tau(), problem.c2());
    let sigma = match request.sigma {
        SigmaChoice::Value(s) => s,
        SigmaChoice::Threshold => threshold.max(0.0),
    };
    let initial = random_initial(request.n, request.alpha, request.seed);
    let outcome = march_from(
        &problem,
        &grid,
        SchemeParams::new(sigma)?,
        initial,
        MarchOptions::default(),
    )?;
    let faces = face_coefficients(&problem, &grid)?;
    let norms = outcome
        .history
        .levels()
        .iter()
        .map(|y| energy_norm1(y, &faces, grid.h(), request.alpha, request.beta))
        .collect::<Result<Vec<f64>>>()?;
    let bound = norms[0] * (1.0 + DECAY_SLACK);
    let passed = outcome.blow_up.is_none() && norms.iter().all(|&v| v <= bound);
    Ok(StabilityReport {
        request: request.clone(),
        case,
        sigma,
        threshold,
        norms,
        passed,
    })
}
