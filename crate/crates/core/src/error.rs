use std::path::PathBuf;

/// Everything that can go wrong between reading the byte stream and
/// writing the last CSV row.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("byte stream exhausted: needed {needed} more bytes at offset {offset}")]
    ExhaustedStream { offset: usize, needed: usize },

    #[error("point {x} lies outside the coefficient domain ({lo}, {hi})")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("coefficient must be strictly positive, found {value} at x = {x}")]
    NonpositiveCoefficient { x: f64, value: f64 },

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("coefficient tensor in square {square} is not symmetric positive definite")]
    NonSpdCoefficient { square: usize },

    #[error("conjugate gradient stalled after {iterations} iterations (relative residual {residual:.3e}){}",
        .cell.map(|(i, j)| format!(" in cell ({i}, {j})")).unwrap_or_default())]
    NoConvergence {
        iterations: usize,
        residual: f64,
        cell: Option<(usize, usize)>,
    },

    #[error("effective tensor eigenvalue {eigenvalue} outside Voigt-Reuss bounds [{lower}, {upper}]")]
    BoundsViolation { eigenvalue: f64, lower: f64, upper: f64 },

    #[error("reference solution has zero norm")]
    ZeroReference,

    #[error("query point ({0}, {1}) lies outside the unit square")]
    QueryOutsideDomain(f64, f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
