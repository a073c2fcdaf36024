use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the time step follows the space step on each refinement level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// `h^2 = tau^(2 - gamma)`, with `Nt` rounded up.
    Paper,
    /// Fixed step; `Nt = ceil(T / tau)`.
    FixedTau(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Trapezoidal discrete L2 norm.
    Full,
    /// Max norm over nodes.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Table,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "table" => Ok(Self::Table),
            other => Err(Error::Config {
                field: "format".into(),
                reason: format!("`{other}` is not one of csv, table"),
            }),
        }
    }
}

/// A refinement study, read from a flat JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub problem: String,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub levels: Vec<usize>,
    pub coupling: Coupling,
    pub norms: Vec<NormKind>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            problem: super::catalog::MANUFACTURED.into(),
            gamma: 0.5,
            alpha: 3.0,
            beta: 2.0,
            sigma: 1.0,
            t_final: 1.0,
            levels: vec![20, 40, 80],
            coupling: Coupling::Paper,
            norms: vec![NormKind::Full, NormKind::Max],
            output: None,
            format: OutputFormat::Table,
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid("<json>", e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(invalid("gamma", format!("{} not in (0, 1)", self.gamma)));
        }
        if !(self.alpha * self.beta > 0.0) {
            return Err(invalid("alpha", "alpha * beta must be positive"));
        }
        if !(0.0..=1.0).contains(&self.sigma) {
            return Err(invalid("sigma", format!("{} not in [0, 1]", self.sigma)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid("T", "must be positive"));
        }
        if self.levels.is_empty() {
            return Err(invalid("levels", "at least one level is required"));
        }
        if self.levels[0] < 2 || self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(
                "levels",
                "must be strictly increasing and at least 2",
            ));
        }
        if let Coupling::FixedTau(tau) = self.coupling {
            if !(tau > 0.0 && tau <= self.t_final) {
                return Err(invalid(
                    "coupling",
                    format!("fixed tau {tau} must lie in (0, T]"),
                ));
            }
        }
        if self.norms.is_empty() {
            return Err(invalid("norms", "select at least one of full, max"));
        }
        Ok(())
    }

    pub fn wants(&self, norm: NormKind) -> bool {
        self.norms.contains(&norm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_document() {
        let cfg = StudyConfig::from_json(
            r#"{"gamma": 0.8, "alpha": 200, "beta": 100, "T": 1.0,
                "levels": [20, 40], "coupling": {"fixed_tau": 0.01},
                "norms": ["full"], "format": "csv", "output": "out.csv"}"#,
        )
        .unwrap();
        assert_eq!(cfg.gamma, 0.8);
        assert_eq!(cfg.levels, vec![20, 40]);
        assert_eq!(cfg.coupling, Coupling::FixedTau(0.01));
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert!(cfg.wants(NormKind::Full) && !cfg.wants(NormKind::Max));
        assert_eq!(cfg.sigma, 1.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn paper_coupling_literal() {
        let cfg = StudyConfig::from_json(r#"{"coupling": "paper"}"#).unwrap();
        assert_eq!(cfg.coupling, Coupling::Paper);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_levels() {
        assert!(StudyConfig::from_json(r#"{"gama": 0.5}"#).is_err());
        let cfg = StudyConfig {
            levels: vec![40, 20],
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config { field, .. }) if field == "levels"));
        let cfg = StudyConfig {
            beta: -1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
