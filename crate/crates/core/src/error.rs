use thiserror::Error;

/// Errors raised by grid construction, problem validation, the solver and the
/// study harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parameter `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("diffusivity bound violated at {location} {index}: value {value} not in [{c1}, {c2}]")]
    BoundsViolation {
        location: &'static str,
        index: usize,
        value: f64,
        c1: f64,
        c2: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("singular system: pivot {pivot:e}")]
    Singular { pivot: f64 },

    #[error("assembled system has a zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("quadrature did not converge: estimated error {achieved:e} exceeds {requested:e}")]
    OracleFailure { achieved: f64, requested: f64 },

    #[error(
        "energy norm undefined: (beta/alpha - 1)(alpha^2 - 1) = {product} < 0 for alpha={alpha}, beta={beta}"
    )]
    UndefinedNorm { alpha: f64, beta: f64, product: f64 },

    #[error("compatibility check `{identity}` failed: residual {residual:e} > {tolerance:e} at x={x}, t={t}")]
    Compatibility {
        identity: &'static str,
        residual: f64,
        tolerance: f64,
        x: f64,
        t: f64,
    },

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("unknown problem `{name}`; available: {available}")]
    UnknownProblem { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        name,
        reason: reason.into(),
    }
}
