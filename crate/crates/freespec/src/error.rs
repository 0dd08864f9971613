use thiserror::Error;

/// Errors raised by measure construction, transform evaluation and the
/// operator-level computations built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    /// A measure failed validation (mass not 1, bad grid, ...).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// An integrand has a pole on the support of the measure.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Argument outside the domain of a transform.
    #[error("domain error: {0}")]
    Domain(String),

    /// The radial inversion requires a non-Dirac squared-modulus law.
    #[error("dirac input: the squared-modulus distribution is a point mass")]
    DiracInput,

    /// A caller-checkable precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A configured resource bound (word length, expansion size) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Malformed command line input (bad matrix literal, unknown value, ...).
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for math/precondition failures,
    /// 2 for i/o, 64 for malformed usage.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Json(_) => 2,
            Error::Usage(_) => 64,
            _ => 1,
        }
    }
}
