//! Named problems addressable from the command line.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::manufactured::build_manufactured;
use crate::problem::Problem;

/// Manufactured polynomial-in-time solution with `k = e^x`.
pub const MANUFACTURED: &str = "paper-sec3";
/// Zero data with `k = e^x`; the solution is identically zero.
pub const ZERO: &str = "zero";
/// `u = 1` for all time; needs `alpha = 1`.
pub const CONSTANT: &str = "constant";

pub const NAMES: [&str; 3] = [MANUFACTURED, ZERO, CONSTANT];

pub fn build(name: &str, gamma: f64, alpha: f64, beta: f64) -> Result<Problem> {
    match name {
        MANUFACTURED => Ok(build_manufactured(alpha, beta, gamma)?.problem),
        ZERO => Ok(Problem::new(gamma, alpha, beta, f64::exp, 1.0, E)?.with_exact(|_, _| 0.0)),
        CONSTANT => {
            if alpha != 1.0 {
                return Err(Error::Config {
                    field: "alpha".into(),
                    reason: format!("problem `{CONSTANT}` needs alpha = 1, got {alpha}"),
                });
            }
            Ok(Problem::new(gamma, alpha, beta, f64::exp, 1.0, E)?
                .with_initial(|_| 1.0)
                .with_exact(|_, _| 1.0))
        }
        other => Err(Error::UnknownProblem {
            name: other.into(),
            available: NAMES.join(", "),
        }),
    }
}
