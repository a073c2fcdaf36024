//! Weighted L1 finite-difference solver for the time-fractional diffusion
//! equation `D^gamma u = (k(x) u_x)_x + f(x, t)` on `(0, 1)` with the nonlocal
//! boundary conditions
//!
//! ```text
//! u(0, t) = alpha u(1, t),    k(1) u_x(1, t) = beta k(0) u_x(0, t) + mu(t),
//! ```
//!
//! together with the energy norm in which the scheme is stable, and a study
//! harness for convergence and stability experiments.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod fractional;
pub mod grid;
pub mod manufactured;
pub mod norms;
pub mod problem;
pub mod quadrature;
pub mod stepper;
pub mod study;

pub use error::{Error, Result};
pub use grid::{weighted_level, Grid, History, SchemeParams, TimeLevel};
pub use problem::{face_coefficients, Problem};
