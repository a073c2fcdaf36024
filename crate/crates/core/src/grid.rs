//! Uniform space/time meshes and the solution containers that live on them.

use crate::error::{domain, Error, Result};

/// Uniform mesh `x_i = i h` on `[0, 1]` and `t_n = n tau` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    nt: usize,
    h: f64,
    tau: f64,
    t_final: f64,
}

impl Grid {
    pub fn new(n: usize, nt: usize, t_final: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("N = {n} must be at least 2")));
        }
        if nt < 1 {
            return Err(Error::InvalidGrid("Nt must be at least 1".into()));
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "T = {t_final} must be positive"
            )));
        }
        Ok(Self {
            n,
            nt,
            h: 1.0 / n as f64,
            tau: t_final / nt as f64,
            t_final,
        })
    }

    /// Grid with the time step tied to the space step through `h^2 = tau^(2 - gamma)`.
    ///
    /// `T / tau*` is rarely an integer, so the step count is rounded up and
    /// `tau = T / Nt` never exceeds `tau* = h^(2 / (2 - gamma))`.
    pub fn with_paper_coupling(n: usize, gamma: f64, t_final: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(domain("gamma", format!("{gamma} not in (0, 1)")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("N = {n} must be at least 2")));
        }
        let h = 1.0 / n as f64;
        let tau_target = h.powf(2.0 / (2.0 - gamma));
        let ratio = t_final / tau_target;
        // absorb roundoff when the ratio is integral
        let nt = (ratio - 1e-9).ceil().max(1.0) as usize;
        Self::new(n, nt, t_final)
    }

    /// Number of space subintervals `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of time steps `Nt`.
    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Space node `x_i`; `x_N` is exactly 1.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    /// Time node `t_n`; `t_Nt` is exactly `T`.
    pub fn t(&self, level: usize) -> f64 {
        if level == self.nt {
            self.t_final
        } else {
            level as f64 * self.t_final / self.nt as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.x(i)).collect()
    }
}

/// Weight of the new level in the spatial operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    sigma: f64,
}

impl SchemeParams {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sigma) {
            return Err(domain("sigma", format!("{sigma} not in [0, 1]")));
        }
        Ok(Self { sigma })
    }

    /// Fully implicit scheme.
    pub fn implicit() -> Self {
        Self { sigma: 1.0 }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Solution values `y_0 .. y_N` at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeLevel(Vec<f64>);

impl TimeLevel {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn sample(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self((0..=grid.n()).map(|i| f(grid.x(i))).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Elementwise difference `self - other`.
    pub fn sub(&self, other: &TimeLevel) -> Result<TimeLevel> {
        check_len(self.len(), other.len())?;
        Ok(TimeLevel(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, factor: f64) -> TimeLevel {
        TimeLevel(self.0.iter().map(|v| factor * v).collect())
    }

    /// The level read right to left, `v_i = y_{N-i}`.
    pub fn reflected(&self) -> TimeLevel {
        TimeLevel(self.0.iter().rev().copied().collect())
    }
}

impl std::ops::Index<usize> for TimeLevel {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension { expected, got });
    }
    Ok(())
}

/// `sigma * next + (1 - sigma) * curr`, elementwise.
pub fn weighted_level(next: &TimeLevel, curr: &TimeLevel, sigma: f64) -> Result<TimeLevel> {
    check_len(next.len(), curr.len())?;
    Ok(TimeLevel(
        next.0
            .iter()
            .zip(&curr.0)
            .map(|(a, b)| sigma * a + (1.0 - sigma) * b)
            .collect(),
    ))
}

/// Every computed level, oldest first. The L1 operator reads all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    levels: Vec<TimeLevel>,
}

impl History {
    pub fn new(initial: TimeLevel) -> Self {
        Self {
            levels: vec![initial],
        }
    }

    pub fn push(&mut self, level: TimeLevel) -> Result<()> {
        check_len(self.width(), level.len())?;
        self.levels.push(level);
        Ok(())
    }

    /// Number of stored values per level (`N + 1`).
    pub fn width(&self) -> usize {
        self.levels[0].len()
    }

    pub fn levels(&self) -> &[TimeLevel] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn last(&self) -> &TimeLevel {
        self.levels.last().expect("history always holds level 0")
    }

    /// Time series of node `i` across all stored levels.
    pub fn node_series(&self, i: usize) -> Vec<f64> {
        self.levels.iter().map(|l| l[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_is_consistent() {
        for n in [2, 3, 7, 20, 320] {
            let g = Grid::new(n, 13, 1.7).unwrap();
            assert!((g.h() * n as f64 - 1.0).abs() <= 1e-14);
            assert!((g.tau() * 13.0 - 1.7).abs() / 1.7 <= 1e-14);
            assert_eq!(g.x(n), 1.0);
            assert_eq!(g.t(13), 1.7);
        }
    }

    #[test]
    fn grid_rejects_degenerate_sizes() {
        assert!(Grid::new(1, 10, 1.0).is_err());
        assert!(Grid::new(4, 0, 1.0).is_err());
        assert!(Grid::new(4, 10, 0.0).is_err());
    }

    #[test]
    fn paper_coupling_keeps_tau_below_target() {
        for &gamma in &[0.2, 0.4, 0.5, 0.8] {
            for n in [20, 40, 80] {
                let g = Grid::with_paper_coupling(n, gamma, 1.0).unwrap();
                let target = (1.0 / n as f64).powf(2.0 / (2.0 - gamma));
                assert!(g.tau() <= target * (1.0 + 1e-12));
                // one fewer step would overshoot the target
                assert!(1.0 / (g.nt() - 1) as f64 > target);
            }
        }
    }

    #[test]
    fn sigma_bounds() {
        assert!(SchemeParams::new(-0.1).is_err());
        assert!(SchemeParams::new(1.1).is_err());
        assert_eq!(SchemeParams::new(0.0).unwrap().sigma(), 0.0);
    }

    #[test]
    fn weighted_level_cases() {
        let next = TimeLevel::new(vec![2.0, 4.0]);
        let curr = TimeLevel::new(vec![0.0, -2.0]);
        assert_eq!(weighted_level(&next, &curr, 1.0).unwrap(), next);
        assert_eq!(weighted_level(&next, &curr, 0.0).unwrap(), curr);
        let mid = weighted_level(&TimeLevel::new(vec![2.0]), &TimeLevel::new(vec![0.0]), 0.5);
        assert_eq!(mid.unwrap().values(), &[1.0]);
        assert!(matches!(
            weighted_level(&next, &TimeLevel::zeros(3), 0.5),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn history_rejects_ragged_levels() {
        let mut h = History::new(TimeLevel::zeros(5));
        assert!(h.push(TimeLevel::zeros(5)).is_ok());
        assert!(h.push(TimeLevel::zeros(4)).is_err());
        assert_eq!(h.len(), 2);
    }

    proptest::proptest! {
        #[test]
        fn weighted_level_is_affine(
            a in -10.0f64..10.0,
            sigma in 0.0f64..=1.0,
            u in proptest::collection::vec(-5.0f64..5.0, 6),
            v in proptest::collection::vec(-5.0f64..5.0, 6),
        ) {
            let u = TimeLevel::new(u);
            let v = TimeLevel::new(v);
            let lhs = weighted_level(&u.scale(a), &v.scale(a), sigma).unwrap();
            let rhs = weighted_level(&u, &v, sigma).unwrap().scale(a);
            for (l, r) in lhs.values().iter().zip(rhs.values()) {
                proptest::prop_assert!((l - r).abs() <= 1e-12 * (1.0 + r.abs()));
            }
        }
    }
}
