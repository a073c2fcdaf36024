//! Truncation-error study of the L1 operator against the quadrature oracle.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fractional::discrete_caputo;
use crate::quadrature::caputo_oracle;

/// Smooth test functions with known derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Linear,
    Cubic,
    /// `t^3 - t^2 + t + 1`.
    TimeFactor,
    Exp,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] = [Self::Linear, Self::Cubic, Self::TimeFactor, Self::Exp];

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Cubic => "cubic",
            Self::TimeFactor => "time-factor",
            Self::Exp => "exp",
        }
    }

    pub fn value(self, t: f64) -> f64 {
        match self {
            Self::Linear => t,
            Self::Cubic => t * t * t,
            Self::TimeFactor => ((t - 1.0) * t + 1.0) * t + 1.0,
            Self::Exp => t.exp(),
        }
    }

    pub fn derivative(self, t: f64) -> f64 {
        match self {
            Self::Linear => 1.0,
            Self::Cubic => 3.0 * t * t,
            Self::TimeFactor => 3.0 * t * t - 2.0 * t + 1.0,
            Self::Exp => t.exp(),
        }
    }
}

impl std::str::FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config {
                field: "function".into(),
                reason: format!(
                    "`{s}` is not one of {}",
                    Self::ALL.map(|f| f.name()).join(", ")
                ),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Row {
    pub gamma: f64,
    pub steps: usize,
    pub tau: f64,
    pub error: f64,
    /// `log2(e_prev / e)` against the previous (coarser) row of the same gamma.
    pub order: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Lemma1Report {
    pub function: TestFunction,
    pub t_final: f64,
    pub rows: Vec<Lemma1Row>,
}

impl Lemma1Report {
    /// Order observed at the finest pair of steps for `gamma`.
    pub fn finest_order(&self, gamma: f64) -> Option<f64> {
        self.rows
            .iter()
            .rev()
            .filter(|r| r.gamma == gamma)
            .find_map(|r| r.order)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma,Nt,tau,error,order\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{:.5e},{:.5e},{}",
                r.gamma,
                r.steps,
                r.tau,
                r.error,
                r.order.map(|o| format!("{o:.5e}")).unwrap_or_default()
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("function={} T={}\n", self.function.name(), self.t_final);
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>12} {:>12} {:>7}",
            "gamma", "Nt", "tau", "error", "order"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>6} {:>6} {:>12.5e} {:>12.5e} {:>7}",
                r.gamma,
                r.steps,
                r.tau,
                r.error,
                r.order.map(|o| format!("{o:.3}")).unwrap_or_default()
            );
        }
        out
    }
}

/// `|L1(v) - D^gamma v|` at `t = T` for each gamma and each step count.
/// Step counts are expected to double from one entry to the next.
pub fn cmd_lemma1(
    gammas: &[f64],
    steps: &[usize],
    function: TestFunction,
    t_final: f64,
) -> Result<Lemma1Report> {
    if steps.is_empty() || steps.contains(&0) {
        return Err(Error::Config {
            field: "steps".into(),
            reason: "need positive step counts".into(),
        });
    }
    let mut rows = Vec::new();
    for &gamma in gammas {
        let exact = caputo_oracle(|t| function.derivative(t), t_final, gamma)?;
        let mut prev: Option<(f64, f64)> = None;
        for &nt in steps {
            let tau = t_final / nt as f64;
            let series: Vec<f64> = (0..=nt).map(|j| function.value(j as f64 * tau)).collect();
            let error = (discrete_caputo(&series, gamma, tau)? - exact).abs();
            let order = prev.and_then(|(e, t)| {
                (e > 0.0 && error > 0.0).then(|| (e / error).ln() / (t / tau).ln())
            });
            rows.push(Lemma1Row {
                gamma,
                steps: nt,
                tau,
                error,
                order,
            });
            prev = Some((error, tau));
        }
    }
    Ok(Lemma1Report {
        function,
        t_final,
        rows,
    })
}
