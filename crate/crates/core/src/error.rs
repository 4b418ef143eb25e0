use thiserror::Error;

/// Errors raised across the library. Variants carry the measured quantity
/// that tripped the check so callers can report it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("matrix is defective: eigenvector condition number {condition:e}")]
    Defective { condition: f64 },
    #[error("spectrum is degenerate: minimal eigenvalue gap {gap:e}")]
    Degenerate { gap: f64 },
    #[error("matrix is singular: pivot {pivot:e}")]
    Singular { pivot: f64 },
    #[error("matrix is not hermitian: residual {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive definite: minimal eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("spectrum is complex: max |Im E| = {max_imag:e}")]
    ComplexSpectrum { max_imag: f64 },
    #[error("parity operator is not an involution: residual {residual:e}")]
    NotInvolution { residual: f64 },
    #[error("commutator series order {order} exceeds cap {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },
    #[error("pointer count {pointers} does not match system dimension {dim}")]
    PointerCountMismatch { pointers: usize, dim: usize },
    #[error("invalid apparatus: {0}")]
    InvalidApparatus(String),
    #[error("metric is singular at t = {t}")]
    SingularMetric { t: f64 },
    #[error("metric norm drifted by {drift:e} at t = {t}; reduce the time step")]
    StepTooLarge { t: f64, drift: f64 },
    #[error("non-hermitian state requires a metric")]
    MissingMetric,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
