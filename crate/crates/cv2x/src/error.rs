use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error:e})"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("derivative order {order} unsupported ({reason})")]
    UnsupportedOrder { order: u32, reason: String },

    #[error("{what} = {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("transmitter and receiver are co-located (zero distance)")]
    DegenerateDistance,

    #[error("no association candidate: realization has neither an MBS nor a typical-road SBS")]
    NoCandidate,

    #[error("unsupported (case, serving) pair: {0}")]
    UnsupportedPair(String),

    #[error("association probabilities sum to {0}, expected 1 within 1e-6")]
    ConservationViolation(f64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv write failed: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
