use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::grid::{Grid, SchemeParams, TimeLevel};
use crate::norms::{convergence_order, norm_full, norm_max};
use crate::problem::Problem;
use crate::stepper::{march_with, BlowUp, MarchOptions, SolveOutcome};

use super::catalog;
use super::config::{Coupling, NormKind, OutputFormat, StudyConfig};

/// Largest error over all stored levels, in both norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub full: f64,
    pub max: f64,
}

/// `max_n |[y^n - u(., t_n)]|_0` and `max_n max_i |y_i^n - u(x_i, t_n)|`.
pub fn error_norms(problem: &Problem, grid: &Grid, outcome: &SolveOutcome) -> Result<ErrorNorms> {
    if !problem.has_exact() {
        return Err(Error::Config {
            field: "problem".into(),
            reason: "error norms need a problem with an exact solution".into(),
        });
    }
    let mut norms = ErrorNorms {
        full: 0.0,
        max: 0.0,
    };
    for (level, y) in outcome.history.levels().iter().enumerate() {
        let t = grid.t(level);
        let exact = TimeLevel::sample(grid, |x| problem.exact(x, t).unwrap_or(0.0));
        let z = y.sub(&exact)?;
        let (full, max) = (norm_full(&z, grid.h()), norm_max(&z));
        // NaN must win over finite values
        norms.full = if full.is_nan() {
            full
        } else {
            norms.full.max(full)
        };
        norms.max = if max.is_nan() {
            max
        } else {
            norms.max.max(max)
        };
    }
    Ok(norms)
}

pub fn grid_for(config: &StudyConfig, n: usize) -> Result<Grid> {
    match config.coupling {
        Coupling::Paper => Grid::with_paper_coupling(n, config.gamma, config.t_final),
        Coupling::FixedTau(tau) => {
            let nt = ((config.t_final / tau) - 1e-9).ceil().max(1.0) as usize;
            Grid::new(n, nt, config.t_final)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub h: f64,
    pub nt: usize,
    pub tau: f64,
    pub err_full: Option<f64>,
    pub co_full: Option<f64>,
    pub err_max: Option<f64>,
    pub co_max: Option<f64>,
    pub blow_up: Option<BlowUp>,
    /// Largest per-step relative residual of the linear solves.
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub rows: Vec<StudyRow>,
    pub wall_time: Duration,
}

pub const CSV_HEADER: &str = "h,Nt,tau,err_full,co_full,err_max,co_max";

fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

fn opt_sci(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

impl StudyReport {
    pub fn any_blow_up(&self) -> bool {
        self.rows.iter().any(|r| r.blow_up.is_some())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                sci(r.h),
                r.nt,
                sci(r.tau),
                opt_sci(r.err_full),
                opt_sci(r.co_full),
                opt_sci(r.err_max),
                opt_sci(r.co_max)
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "problem={} gamma={} alpha={} beta={} sigma={} T={}",
            c.problem, c.gamma, c.alpha, c.beta, c.sigma, c.t_final
        );
        let _ = writeln!(
            out,
            "{:>8} {:>6} {:>12} {:>14} {:>8} {:>14} {:>8}",
            "h", "Nt", "tau", "max|[z]|_0", "CO", "max|z|_C", "CO"
        );
        for r in &self.rows {
            let co = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:>8} {:>6} {:>12} {:>14} {:>8} {:>14} {:>8}{}",
                format!("1/{}", (1.0 / r.h).round()),
                r.nt,
                sci(r.tau),
                opt_sci(r.err_full),
                co(r.co_full),
                opt_sci(r.err_max),
                co(r.co_max),
                match r.blow_up {
                    Some(b) => format!("  blow-up at level {}", b.level),
                    None => String::new(),
                }
            );
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Table => self.to_table(),
        }
    }
}

struct LevelResult {
    grid: Grid,
    errors: ErrorNorms,
    blow_up: Option<BlowUp>,
    max_residual: f64,
}

fn run_level(problem: &Problem, config: &StudyConfig, n: usize) -> Result<LevelResult> {
    let grid = grid_for(config, n)?;
    let params = SchemeParams::new(config.sigma)?;
    let outcome = march_with(
        problem,
        &grid,
        params,
        MarchOptions {
            check_residuals: true,
        },
    )?;
    let errors = error_norms(problem, &grid, &outcome)?;
    let max_residual = outcome
        .residuals
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .fold(0.0, |m: f64, &r| if r.is_nan() { r } else { m.max(r) });
    Ok(LevelResult {
        grid,
        errors,
        blow_up: outcome.blow_up,
        max_residual,
    })
}

fn order(coarse: &LevelResult, fine: &LevelResult, pick: fn(&ErrorNorms) -> f64) -> Option<f64> {
    if coarse.blow_up.is_some() || fine.blow_up.is_some() {
        return None;
    }
    convergence_order(
        pick(&coarse.errors),
        pick(&fine.errors),
        coarse.grid.h(),
        fine.grid.h(),
    )
    .ok()
}

/// Runs one march per refinement level (concurrently) and tabulates the
/// errors against the exact solution with pairwise convergence orders.
pub fn cmd_convergence(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let started = Instant::now();
    let problem = catalog::build(&config.problem, config.gamma, config.alpha, config.beta)?;
    if !problem.has_exact() {
        return Err(Error::Config {
            field: "problem".into(),
            reason: format!("`{}` has no exact solution", config.problem),
        });
    }
    let results: Vec<Result<LevelResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .levels
            .iter()
            .map(|&n| {
                let problem = &problem;
                scope.spawn(move || run_level(problem, config, n))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("level worker panicked"))
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let rows = results
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let prev = k.checked_sub(1).map(|j| &results[j]);
            let co = |pick: fn(&ErrorNorms) -> f64| prev.and_then(|p| order(p, r, pick));
            let full = config.wants(NormKind::Full);
            let max = config.wants(NormKind::Max);
            StudyRow {
                h: r.grid.h(),
                nt: r.grid.nt(),
                tau: r.grid.tau(),
                err_full: full.then_some(r.errors.full),
                co_full: if full { co(|e| e.full) } else { None },
                err_max: max.then_some(r.errors.max),
                co_max: if max { co(|e| e.max) } else { None },
                blow_up: r.blow_up,
                max_residual: r.max_residual,
            }
        })
        .collect();
    Ok(StudyReport {
        config: config.clone(),
        rows,
        wall_time: started.elapsed(),
    })
}
