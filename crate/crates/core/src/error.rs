use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("section bases have different powers ({0} vs {1})")]
    PowerMismatch(u32, u32),

    #[error("unsupported quadrature domain: {0}")]
    UnsupportedDomain(String),

    #[error("degenerate submanifold at parameter {param:?}: tangent Gram determinant {det:e}")]
    DegenerateSubmanifold { param: Vec<f64>, det: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("non-finite integrand value at node {node:?}")]
    NonFinite { node: Vec<f64> },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("vector is not normalized (norm {0})")]
    NonUnit(f64),

    #[error("operation requires a {expected} system, got {d1}x{d2}")]
    UnsupportedDimension {
        expected: &'static str,
        d1: usize,
        d2: usize,
    },

    #[error("invalid specification: {0}")]
    Spec(String),
}

impl Error {
    /// True for failures caused by the state or submanifold being
    /// degenerate rather than by numerics or malformed input.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::DegenerateState(_) | Error::DegenerateSubmanifold { .. })
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::NotHermitian(_) | Error::NotPsd(_) | Error::InvalidTrace(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
