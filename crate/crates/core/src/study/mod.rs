//! Batch experiments behind the command-line harness: refinement studies,
//! single solves, L1 truncation-order checks and energy-decay runs.

pub mod catalog;
pub mod config;
pub mod convergence;
pub mod lemma1;
pub mod rng;
pub mod solve;
pub mod stability;

pub use config::{Coupling, NormKind, OutputFormat, StudyConfig};
pub use convergence::{cmd_convergence, error_norms, ErrorNorms, StudyReport, StudyRow};
pub use lemma1::{cmd_lemma1, Lemma1Report, TestFunction};
pub use solve::{cmd_solve, SolveReport, SolveRequest};
pub use stability::{cmd_stability, SigmaChoice, StabilityReport, StabilityRequest};
