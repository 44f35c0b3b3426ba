use thiserror::Error;

use crate::template::{EvalError, ParseError, TemplateError};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular (|det| = {det_abs:e}, threshold {threshold:e})")]
    Singular { det_abs: f64, threshold: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} sweeps")]
    Convergence { iterations: usize },

    #[error("parameters (a = {a}, b = {b}) sit on an exceptional point: a^2 - b^2 = {gap:e}")]
    ExceptionalPoint { a: f64, b: f64, gap: f64 },

    #[error("{0}")]
    OperatorKind(String),

    #[error("matrix dimension {dim} exceeds the limit of {limit} for {op}")]
    SizeLimit { op: &'static str, dim: usize, limit: usize },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("grid point {index} (t = {t}): {source}")]
    GridPoint {
        index: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown preset case {0} (expected 1..=4)")]
    UnknownCase(u32),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error(transparent)]
    Template(#[from] TemplateError),

    #[error("report format: {0}")]
    Report(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Shape {
            op,
            detail: detail.into(),
        }
    }
}
