use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Bessel order {order} exceeds the supported maximum {max}")]
    OrderOutOfRange { order: u32, max: u32 },

    #[error("argument {arg} outside the domain of {function}")]
    Domain { function: &'static str, arg: f64 },

    #[error("{function}({order}, {arg}) overflows f64")]
    Overflow {
        function: &'static str,
        order: u32,
        arg: f64,
    },

    #[error("fundamental solution evaluated at its own source point")]
    CoincidentPoints,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("non-positive pivot {pivot:e} at row {row}; matrix not positive definite (regularization too small?)")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("exact field is singular at boundary point ({x}, {y})")]
    SingularOnBoundary { x: f64, y: f64 },

    #[error("query point ({x}, {y}) lies on the source circle")]
    QueryOnSourceCircle { x: f64, y: f64 },

    #[error("need at least {needed} usable samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("Fourier coefficients fall below {threshold:e} across the fitting band; decay too fast to fit")]
    DecayTooFast { threshold: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("malformed operator archive: {0}")]
    Archive(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
