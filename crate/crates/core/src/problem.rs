//! PDE data for `D^gamma u = (k u_x)_x + f` on `(0, 1)` with the nonlocal
//! boundary conditions `u(0,t) = alpha u(1,t)` and
//! `k(1) u_x(1,t) = beta k(0) u_x(0,t) + mu(t)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::grid::Grid;

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct Problem {
    gamma: f64,
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
    k: SpaceFn,
    source: FieldFn,
    mu: TimeFn,
    u0: SpaceFn,
    exact: Option<FieldFn>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("gamma", &self.gamma)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl Problem {
    /// Homogeneous problem (zero source, datum and initial value) with
    /// diffusivity `k` bounded by `c1 <= k <= c2`.
    pub fn new(
        gamma: f64,
        alpha: f64,
        beta: f64,
        k: impl Fn(f64) -> f64 + Send + Sync + 'static,
        c1: f64,
        c2: f64,
    ) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(domain("gamma", format!("{gamma} not in (0, 1)")));
        }
        if !(alpha.is_finite() && beta.is_finite() && alpha * beta > 0.0) {
            return Err(domain(
                "alpha*beta",
                format!("alpha={alpha}, beta={beta}: product must be positive"),
            ));
        }
        if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
            return Err(domain(
                "c1,c2",
                format!("need 0 < c1 <= c2, got {c1}, {c2}"),
            ));
        }
        Ok(Self {
            gamma,
            alpha,
            beta,
            c1,
            c2,
            k: Arc::new(k),
            source: Arc::new(|_, _| 0.0),
            mu: Arc::new(|_| 0.0),
            u0: Arc::new(|_| 0.0),
            exact: None,
        })
    }

    pub fn with_source(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Arc::new(f);
        self
    }

    pub fn with_boundary_datum(mut self, mu: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.mu = Arc::new(mu);
        self
    }

    pub fn with_initial(mut self, u0: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.u0 = Arc::new(u0);
        self
    }

    pub fn with_exact(mut self, u: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(u));
        self
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn k(&self, x: f64) -> f64 {
        (self.k)(x)
    }

    pub fn source(&self, x: f64, t: f64) -> f64 {
        (self.source)(x, t)
    }

    pub fn mu(&self, t: f64) -> f64 {
        (self.mu)(t)
    }

    pub fn u0(&self, x: f64) -> f64 {
        (self.u0)(x)
    }

    pub fn exact(&self, x: f64, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|u| u(x, t))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Checks `c1 <= k(x_i) <= c2` on every grid node.
    pub fn check_node_bounds(&self, grid: &Grid) -> Result<()> {
        for i in 0..=grid.n() {
            self.check_bound("node", i, self.k(grid.x(i)))?;
        }
        Ok(())
    }

    fn check_bound(&self, location: &'static str, index: usize, value: f64) -> Result<()> {
        if !(value >= self.c1 && value <= self.c2) {
            return Err(Error::BoundsViolation {
                location,
                index,
                value,
                c1: self.c1,
                c2: self.c2,
            });
        }
        Ok(())
    }
}

/// Face diffusivities `a_i = k(x_i - h/2)` for `i = 1..N`, returned 0-based
/// (`a[0]` is `a_1`).
pub fn face_coefficients(problem: &Problem, grid: &Grid) -> Result<Vec<f64>> {
    let h = grid.h();
    (1..=grid.n())
        .map(|i| {
            let a = problem.k(grid.x(i) - 0.5 * h);
            problem.check_bound("face", i, a).map(|_| a)
        })
        .collect()
}
