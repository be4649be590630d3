use alloc::string::String;

/// Errors raised by constructions and checks in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("bilinear form is degenerate (|lambda_min| = {min_abs:e}, |lambda_max| = {max_abs:e})")]
    Degenerate { min_abs: f64, max_abs: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form restricted to the tangent space is not positive definite")]
    TangentNotPositiveDefinite,
    #[error("subspace basis is linearly dependent (rank {rank} < {count})")]
    DependentBasis { rank: usize, count: usize },
    #[error("group element is not invertible (|det| = {det:e})")]
    NotInvertible { det: f64 },
    #[error("matrix leaves the algebra: re-expansion residual {residual:e}")]
    ClosureViolation { residual: f64 },
    #[error("Cartan decomposition violated: {inclusion} residual {residual:e}")]
    CartanViolation { inclusion: &'static str, residual: f64 },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("lambda = {lambda} has the wrong sign for {factor}")]
    WrongLambdaSign { factor: String, lambda: f64 },
    #[error("vector is not in m (h-component {residual:e})")]
    NotInM { residual: f64 },
    #[error("vector is not normal (tangent component {residual:e})")]
    NotNormal { residual: f64 },
    #[error("metric on m is singular")]
    SingularMetric,
    #[error("immersion is not full (spans {spanned} of {dim})")]
    NotFull { spanned: usize, dim: usize },
    #[error("kernels of the extended immersions differ ({detail})")]
    KernelMismatch { detail: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("reports were produced with different configurations")]
    ConfigMismatch,
}

pub type Result<T> = core::result::Result<T, Error>;
