use std::fmt::Write as _;

use crate::error::Result;
use crate::grid::{Grid, SchemeParams, TimeLevel};
use crate::norms::{norm_full, norm_max};
use crate::stepper::{march, SolveOutcome};

use super::catalog;
use super::convergence::{error_norms, ErrorNorms};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveRequest {
    pub problem: String,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub n: usize,
    /// `None` ties the step to `h` through `h^2 = tau^(2 - gamma)`.
    pub nt: Option<usize>,
    pub t_final: f64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub grid: Grid,
    pub outcome: SolveOutcome,
    /// Max over all levels, when the problem has an exact solution.
    pub errors: Option<ErrorNorms>,
    /// Errors of the last stored level only.
    pub final_errors: Option<ErrorNorms>,
}

impl SolveReport {
    /// `x,y` rows of the last stored level.
    pub fn final_level_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for (i, y) in self.outcome.history.last().values().iter().enumerate() {
            let _ = writeln!(out, "{:e},{:e}", self.grid.x(i), y);
        }
        out
    }

    /// `level,t,x,y` rows of every stored level.
    pub fn history_csv(&self) -> String {
        let mut out = String::from("level,t,x,y\n");
        for (n, level) in self.outcome.history.levels().iter().enumerate() {
            for (i, y) in level.values().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{:e},{:e},{:e}",
                    n,
                    self.grid.t(n),
                    self.grid.x(i),
                    y
                );
            }
        }
        out
    }
}

pub fn cmd_solve(request: &SolveRequest) -> Result<SolveReport> {
    let problem = catalog::build(&request.problem, request.gamma, request.alpha, request.beta)?;
    let grid = match request.nt {
        Some(nt) => Grid::new(request.n, nt, request.t_final)?,
        None => Grid::with_paper_coupling(request.n, request.gamma, request.t_final)?,
    };
    let outcome = march(&problem, &grid, SchemeParams::new(request.sigma)?)?;
    let (errors, final_errors) = if problem.has_exact() {
        let errors = error_norms(&problem, &grid, &outcome)?;
        let last = outcome.history.len() - 1;
        let t = grid.t(last);
        let exact = TimeLevel::sample(&grid, |x| problem.exact(x, t).unwrap_or(0.0));
        let z = outcome.history.last().sub(&exact)?;
        let final_errors = ErrorNorms {
            full: norm_full(&z, grid.h()),
            max: norm_max(&z),
        };
        (Some(errors), Some(final_errors))
    } else {
        (None, None)
    };
    Ok(SolveReport {
        grid,
        outcome,
        errors,
        final_errors,
    })
}
