use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("nodes must be strictly increasing (x[{index}] = {prev} >= x[{}] = {next})", index + 1)]
    NonMonotonicNodes { index: usize, prev: f64, next: f64 },

    #[error("too few nodes: need at least {needed}, got {got}")]
    TooFewNodes { needed: usize, got: usize },

    #[error("sigma must be a finite real >= 1, got {0}")]
    InvalidSigma(f64),

    #[error("invalid domain [{0}, {1}]")]
    InvalidDomain(f64, f64),

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("stencil [{start}, {end}) out of range for {len} nodes")]
    StencilOutOfRange { start: usize, end: usize, len: usize },

    #[error("index {index} out of range ({reason})")]
    IndexOutOfRange { index: usize, reason: &'static str },

    #[error("sample count {values} does not match node count {nodes}")]
    LengthMismatch { nodes: usize, values: usize },

    #[error("supremum of |f''| must be positive, got {0}")]
    NonpositiveSup(f64),

    #[error("errors must be positive, got {value} at position {index}")]
    NonpositiveError { index: usize, value: f64 },

    #[error("unknown interpolation mode {0:?} (expected lagrange, eno or enosr)")]
    InvalidMode(String),

    #[error("operation requires an ENO-SR interpolant")]
    WrongMode,

    #[error("{x} lies outside [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("order m must be at least {min}, got {m}")]
    InvalidOrder { m: usize, min: usize },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
            _ => Error::Csv(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
