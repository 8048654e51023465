use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("cone {0:?} is not a cone of the fan")]
    NotACone(Vec<usize>),

    #[error("k = {k} out of range 0..={d}")]
    OutOfRange { k: usize, d: usize },

    #[error("weight is not balanced at cones {0:?}")]
    Unbalanced(Vec<Vec<usize>>),

    #[error("missing weight value on cone {0:?}")]
    MissingWeight(Vec<usize>),

    #[error("weight is not positive on cone {0:?}")]
    NonPositiveWeight(Vec<usize>),

    #[error("expected {expected} divisors, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("point is not in the support of the fan")]
    OutsideSupport,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("divisor {index} is not convex")]
    NotConvex {
        index: usize,
        certificate: Box<crate::convexity::ConvexityCertificate>,
    },

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
