//! One time step of the weighted scheme and the march over all levels.
//!
//! Unknowns per step are `y_1 .. y_N`; `y_0` is eliminated through the value
//! coupling `y_0 = alpha y_N`. Rows `1..N-1` are the interior equations and
//! form a tridiagonal block whose first row also touches `y_N`. The last row
//! is the discrete flux condition, coupling `y_1`, `y_{N-1}` and `y_N`.

use crate::error::{Error, Result};
use crate::fractional::{implicit_coefficient, kernel_increments};
use crate::grid::{Grid, History, SchemeParams, TimeLevel};
use crate::problem::{face_coefficients, Problem};

/// Max-norm beyond which a level counts as blown up.
pub const BLOW_UP_THRESHOLD: f64 = 1e100;

/// Coefficients of the flux-condition row on `y_1`, `y_{N-1}` and `y_N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorderRow {
    pub first: f64,
    pub prev: f64,
    pub last: f64,
}

/// Linear system for one step, over unknowns `y_1 .. y_N` (0-based columns
/// `0 .. N-1`).
///
/// `lower`, `diag`, `upper` hold the `N - 1` interior rows; `lower[0]` is
/// unused and `upper[N-2]` multiplies `y_N`. `corner` is the extra `y_N`
/// coefficient of the first interior row that comes from `y_0 = alpha y_N`.
/// `rhs` has `N` entries, the last one for the flux row.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub corner: f64,
    pub border: BorderRow,
    pub rhs: Vec<f64>,
}

impl StepSystem {
    /// Number of unknowns, `N`.
    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    /// The reduced system as a dense row-major matrix.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let mut m = vec![vec![0.0; n]; n];
        for r in 0..n - 1 {
            if r > 0 {
                m[r][r - 1] += self.lower[r];
            }
            m[r][r] += self.diag[r];
            m[r][r + 1] += self.upper[r];
        }
        m[0][n - 1] += self.corner;
        m[n - 1][0] += self.border.first;
        m[n - 1][n - 2] += self.border.prev;
        m[n - 1][n - 1] += self.border.last;
        m
    }

    /// `A y` for the reduced system.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        self.to_dense()
            .iter()
            .map(|row| row.iter().zip(y).map(|(a, v)| a * v).sum())
            .collect()
    }

    /// Largest row residual `|A y - rhs|` divided by that row's scale
    /// `max(|rhs_r|, sum_j |A_rj y_j|)`.
    pub fn relative_residual(&self, y: &[f64]) -> f64 {
        let dense = self.to_dense();
        dense
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| {
                let mut ay = 0.0;
                let mut mag = 0.0;
                for (a, v) in row.iter().zip(y) {
                    ay += a * v;
                    mag += (a * v).abs();
                }
                let scale = mag.max(b.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (ay - b).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Thomas algorithm; `lower[0]` and `upper[last]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::Singular { pivot: denom });
    }
    c[0] = upper[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..m {
        denom = diag[i] - lower[i] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::Singular { pivot: denom });
        }
        c[i] = upper[i] / denom;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    for i in (0..m - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Solves the step system in `O(N)` by superposition.
///
/// The interior block is solved once against the interior right-hand side
/// and once against the `y_N` column, so that `y_int = base - y_N * shift`;
/// the flux row then closes a scalar equation for `y_N`.
pub fn solve_bordered(system: &StepSystem) -> Result<Vec<f64>> {
    let n = system.size();
    let m = n - 1;
    if let Some(row) = system.diag.iter().position(|&d| d == 0.0) {
        return Err(Error::ZeroDiagonal { row: row + 1 });
    }
    let base = solve_tridiagonal(&system.lower, &system.diag, &system.upper, &system.rhs[..m])?;
    let mut column = vec![0.0; m];
    column[0] += system.corner;
    column[m - 1] += system.upper[m - 1];
    let shift = solve_tridiagonal(&system.lower, &system.diag, &system.upper, &column)?;

    let BorderRow { first, prev, last } = system.border;
    let pivot = last - first * shift[0] - prev * shift[m - 1];
    if !(pivot.abs() >= 1e-300) {
        return Err(Error::Singular { pivot });
    }
    let y_n = (system.rhs[m] - first * base[0] - prev * base[m - 1]) / pivot;
    let mut y: Vec<f64> = base.iter().zip(&shift).map(|(b, s)| b - y_n * s).collect();
    y.push(y_n);
    Ok(y)
}

/// Gaussian elimination with partial pivoting on the dense reduced system.
/// Reference solver for tests.
pub fn solve_dense_oracle(system: &StepSystem) -> Result<Vec<f64>> {
    solve_dense(system.to_dense(), system.rhs.clone())
}

/// Dense `A x = b` with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        let pivot = a[pivot_row][col];
        if !(pivot.abs() > 1e-14 * scale) {
            return Err(Error::Singular { pivot });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Precomputed data for repeated steps on one grid.
#[derive(Debug)]
pub struct Scheme<'a> {
    problem: &'a Problem,
    grid: Grid,
    sigma: f64,
    faces: Vec<f64>,
    increments: Vec<f64>,
    c_new: f64,
}

impl<'a> Scheme<'a> {
    pub fn new(problem: &'a Problem, grid: &Grid, params: SchemeParams) -> Result<Self> {
        problem.check_node_bounds(grid)?;
        let faces = face_coefficients(problem, grid)?;
        Ok(Self {
            problem,
            grid: *grid,
            sigma: params.sigma(),
            faces,
            increments: kernel_increments(grid.nt() + 1, problem.gamma()),
            c_new: implicit_coefficient(problem.gamma(), grid.tau()),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    /// Weight of the unknown level in the L1 operator.
    pub fn c_new(&self) -> f64 {
        self.c_new
    }

    /// Per-node history part of the L1 operator at `t_{n+1}`, where `n + 1`
    /// is the number of stored levels.
    pub fn history_load(&self, history: &History) -> Vec<f64> {
        let levels = history.levels();
        let n = levels.len() - 1;
        let width = history.width();
        let mut acc = vec![0.0; width];
        for s in 0..n {
            let w = self.increments[n - s];
            let (older, newer) = (levels[s].values(), levels[s + 1].values());
            for ((a, o), v) in acc.iter_mut().zip(older).zip(newer) {
                *a += w * (v - o);
            }
        }
        let current = levels[n].values();
        acc.iter()
            .zip(current)
            .map(|(a, y)| self.c_new * (a - y))
            .collect()
    }

    /// `(a y_xbar)_x` at interior node `i` for one level.
    fn flux_difference(&self, y: &[f64], i: usize) -> f64 {
        let h2 = self.grid.h() * self.grid.h();
        let (a_left, a_right) = (self.faces[i - 1], self.faces[i]);
        (a_right * (y[i + 1] - y[i]) - a_left * (y[i] - y[i - 1])) / h2
    }

    /// Builds the system for level `n + 1` from levels `0..=n`.
    pub fn assemble(&self, history: &History) -> Result<StepSystem> {
        let n_levels = history.len();
        if n_levels > self.grid.nt() {
            return Err(Error::InvalidGrid(format!(
                "history already holds {} levels; grid has {} steps",
                n_levels,
                self.grid.nt()
            )));
        }
        let nx = self.grid.n();
        if history.width() != nx + 1 {
            return Err(Error::Dimension {
                expected: nx + 1,
                got: history.width(),
            });
        }
        let (h, sigma, c_new) = (self.grid.h(), self.sigma, self.c_new);
        let h2 = h * h;
        let (alpha, beta) = (self.problem.alpha(), self.problem.beta());
        let a = &self.faces;
        let load = self.history_load(history);
        let y_old = history.last().values();
        let t_weighted = self.grid.t(n_levels - 1) + sigma * self.grid.tau();
        let phi: Vec<f64> = (0..=nx)
            .map(|i| self.problem.source(self.grid.x(i), t_weighted))
            .collect();

        let m = nx - 1;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; nx];
        for i in 1..nx {
            let r = i - 1;
            if i > 1 {
                lower[r] = -sigma * a[i - 1] / h2;
            }
            diag[r] = c_new + sigma * (a[i - 1] + a[i]) / h2;
            upper[r] = -sigma * a[i] / h2;
            rhs[r] = phi[i] - load[i] + (1.0 - sigma) * self.flux_difference(y_old, i);
        }
        let corner = -sigma * a[0] * alpha / h2;

        let (a_first, a_last) = (a[0], a[nx - 1]);
        let border = BorderRow {
            first: -2.0 * sigma * beta * a_first / h2,
            prev: -2.0 * sigma * a_last / h2,
            last: c_new * (1.0 + alpha * beta)
                + 2.0 * sigma * (a_last + alpha * beta * a_first) / h2,
        };
        let old_flux =
            a_last * (y_old[nx] - y_old[nx - 1]) / h - beta * a_first * (y_old[1] - y_old[0]) / h;
        rhs[m] = 2.0 / h * self.problem.mu(t_weighted) + phi[nx] + beta * phi[0]
            - beta * load[0]
            - load[nx]
            - (1.0 - sigma) * 2.0 / h * old_flux;

        Ok(StepSystem {
            lower,
            diag,
            upper,
            corner,
            border,
            rhs,
        })
    }

    /// Full level `y_0 .. y_N` from the reduced solution.
    pub fn expand(&self, reduced: &[f64]) -> TimeLevel {
        let y_n = *reduced.last().expect("non-empty solution");
        let mut values = Vec::with_capacity(reduced.len() + 1);
        values.push(self.problem.alpha() * y_n);
        values.extend_from_slice(reduced);
        TimeLevel::new(values)
    }
}

/// Assembles the step producing level `history.len()`.
pub fn assemble_step(
    problem: &Problem,
    grid: &Grid,
    params: SchemeParams,
    history: &History,
) -> Result<StepSystem> {
    Scheme::new(problem, grid, params)?.assemble(history)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUp {
    /// Index of the first offending level.
    pub level: usize,
    /// Max-norm of that level (possibly infinite or NaN).
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// Levels `0..=Nt`, or up to and including the blown-up level.
    pub history: History,
    pub blow_up: Option<BlowUp>,
    pub residuals: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MarchOptions {
    /// Record each step's relative residual (costs `O(N^2)` per step).
    pub check_residuals: bool,
}

pub fn march(problem: &Problem, grid: &Grid, params: SchemeParams) -> Result<SolveOutcome> {
    march_with(problem, grid, params, MarchOptions::default())
}

/// Time march from `u0` through `Nt` steps; stops at the first level that
/// is non-finite or exceeds [`BLOW_UP_THRESHOLD`].
pub fn march_with(
    problem: &Problem,
    grid: &Grid,
    params: SchemeParams,
    options: MarchOptions,
) -> Result<SolveOutcome> {
    let initial = TimeLevel::sample(grid, |x| problem.u0(x));
    march_from(problem, grid, params, initial, options)
}

/// Like [`march_with`] but starting from an explicit initial level.
pub fn march_from(
    problem: &Problem,
    grid: &Grid,
    params: SchemeParams,
    initial: TimeLevel,
    options: MarchOptions,
) -> Result<SolveOutcome> {
    let scheme = Scheme::new(problem, grid, params)?;
    let mut history = History::new(initial);
    let mut residuals = options.check_residuals.then(Vec::new);
    let mut blow_up = None;
    for level in 1..=grid.nt() {
        let system = scheme.assemble(&history)?;
        let reduced = solve_bordered(&system)?;
        if let Some(res) = residuals.as_mut() {
            res.push(system.relative_residual(&reduced));
        }
        let next = scheme.expand(&reduced);
        let norm = next.max_abs();
        let blown = !next.is_finite() || norm > BLOW_UP_THRESHOLD;
        history.push(next)?;
        if blown {
            blow_up = Some(BlowUp { level, norm });
            break;
        }
    }
    Ok(SolveOutcome {
        history,
        blow_up,
        residuals,
    })
}
