use std::path::PathBuf;

use crate::basis::ModeIndex;

/// Errors raised by the spectral solver and its supporting modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("weighted norm overflows at shell {shell} (log-weight {log_weight:.3})")]
    Overflow { shell: u32, log_weight: f64 },

    #[error("dimension mismatch: expected truncation {expected}, found {found}")]
    DimensionMismatch { expected: u32, found: u32 },

    #[error("truncation {requested} exceeds the configured maximum shell {max}")]
    Capacity { requested: u32, max: u32 },

    #[error("degenerate sample: |xi| = {norm:e} is below 1e-8")]
    DegenerateSample { norm: f64 },

    #[error("quadrature order error: {0}")]
    QuadratureOrder(String),

    #[error("initial datum is not orthogonal to the collision invariants: mode {mode} has amplitude {amplitude:e}")]
    NotInNullComplement { mode: ModeIndex, amplitude: f64 },

    #[error("step size dt = {dt} with max eigenvalue {max_lambda} exceeds the rk4 stability bound {bound}")]
    StepSize { dt: f64, max_lambda: f64, bound: f64 },

    #[error("non-finite amplitude at mode {mode}, t = {t}")]
    NonFinite { mode: ModeIndex, t: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violation in rows {rows:?}: {message}")]
    InvariantViolation { rows: Vec<usize>, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("tensor cache error in {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Index(_) => "index",
            Error::Overflow { .. } => "overflow",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Capacity { .. } => "capacity",
            Error::DegenerateSample { .. } => "degenerate_sample",
            Error::QuadratureOrder(_) => "quadrature_order",
            Error::NotInNullComplement { .. } => "null_space_precondition",
            Error::StepSize { .. } => "step_size",
            Error::NonFinite { .. } => "non_finite",
            Error::Parse { .. } => "parse",
            Error::InvariantViolation { .. } => "invariant_violation",
            Error::Config(_) => "config",
            Error::Cache { .. } => "cache",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
