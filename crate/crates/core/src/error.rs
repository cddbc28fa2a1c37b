use thiserror::Error;

/// Errors produced by model construction and the algebraic operations.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate invariant form on isotropy algebra")]
    DegenerateIsotropyForm,

    #[error("metric on m is not positive definite")]
    NonPositiveDefiniteMetric,

    #[error("input tensor is not totally antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("spinor dimension {n} outside supported range 1..=12")]
    UnsupportedSpinorDimension { n: usize },

    #[error("non-constant spinor fields unsupported")]
    NonConstantSpinor,

    #[error("model is not naturally reductive (residual {residual:e})")]
    NotNaturallyReductive { residual: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("operation requires a different builtin model: {0}")]
    WrongModel(String),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
