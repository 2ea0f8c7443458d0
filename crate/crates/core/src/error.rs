use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("a star graph needs at least 2 bonds, got {0}")]
    TooFewBonds(usize),
    #[error("bond {bond}: {field} must be positive and finite, got {value}")]
    NonPositive { bond: usize, field: &'static str, value: f64 },
    #[error("bond {bond}: length {length} is not a whole number of cells of size {dx}")]
    NotCommensurate { bond: usize, length: f64, dx: f64 },
    #[error("bond {bond}: dx {dx} differs from the shared grid spacing {expected}")]
    NonUniformSpacing { bond: usize, dx: f64, expected: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("modified Bessel function requested at negative argument {0}")]
    NegativeArgument(f64),
    #[error("boundary history holds {have} samples, need at least {need}")]
    MissingHistory { have: usize, need: usize },
    #[error("transparent vertex condition requires the interior-only domain (bond 1 alone), got {active} active bonds")]
    ModeMismatch { active: usize },
    #[error("vertex values given for {got} bonds, graph has {expected}")]
    VertexArity { got: usize, expected: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid parameter {field}: {reason}")]
    InvalidParams { field: &'static str, reason: String },
    #[error("CFL condition violated: dt/dx = {ratio} > 1")]
    Cfl { ratio: f64 },
    #[error("initial condition: {0}")]
    InitialCondition(String),
    #[error("numerical instability at step {step}: max |value| = {value:e} exceeds guard {guard:e}")]
    Instability { step: usize, value: f64, guard: f64 },
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("total norm is zero")]
    ZeroNorm,
    #[error("reflection coefficient {reflection} is above the full-transmission threshold {threshold}")]
    NotTransmitted { reflection: f64, threshold: f64 },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("{path}: missing required keys: {}", .keys.join(", "))]
    MissingKeys { path: String, keys: Vec<String> },
    #[error("invalid value for `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
}

/// Top-level error for experiment execution.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{failed} of {total} sweep points failed")]
    SweepFailures { failed: usize, total: usize },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code: 2 validation, 3 numerical instability, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(ConfigError::Read { .. }) => 4,
            Error::Config(_) | Error::Graph(_) | Error::Diagnostics(_) => 2,
            Error::Boundary(_) => 2,
            Error::Solver(SolverError::Instability { .. }) => 3,
            Error::Solver(_) => 2,
            Error::Io { .. } => 4,
            Error::SweepFailures { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
