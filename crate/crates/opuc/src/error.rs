use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("Verblunsky condition violated: |alpha_{n}| = {modulus} >= 1")]
    VerblunskyViolation { n: usize, modulus: f64 },

    #[error("ratio undefined: alpha_{n} = 0")]
    RatioUndefined { n: usize },

    #[error("family carries no decay model")]
    ModelUnavailable,

    #[error("{what}: measured {measured:e} exceeds bound {bound:e}")]
    BoundViolation {
        what: String,
        measured: f64,
        bound: f64,
    },

    #[error("z = {z} outside the valid domain ({domain})")]
    OutsideDomain { z: String, domain: String },

    #[error("no convergence after {iterations} iterations ({context})")]
    NoConvergence { iterations: usize, context: String },

    #[error("evaluation at the pole conj(b_{ell})")]
    PoleHit { ell: usize },

    #[error("geometric fit failed: {0}")]
    FitFailed(String),

    #[error("series tail bound {bound:e} exceeds tolerance")]
    TailTooLarge { bound: f64 },

    #[error("ratio coefficient c_{index} is zero")]
    ZeroRatio { index: usize },

    #[error("factor x_{index} is zero")]
    ZeroFactor { index: usize },

    #[error("no zeros in the critical band")]
    BandEmpty,

    #[error("unmatched zero: {0}")]
    UnmatchedZero(String),

    #[error("invalid family spec: {0}")]
    InvalidFamily(String),

    #[error("need degree >= 1, got {0}")]
    DegreeTooSmall(usize),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
