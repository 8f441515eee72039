use thiserror::Error;

/// Errors raised by the basis, metric and identity operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length {index} must be positive, got {value}")]
    NonPositiveLength { index: usize, value: f64 },

    #[error("angle {pair} must lie strictly inside (0, pi), got {value} rad")]
    AngleOutOfRange { pair: String, value: f64 },

    /// The lengths and angles do not describe linearly independent vectors.
    /// `measure` is |cos a12| in 2D (must be < 1) and the cosine
    /// determinant in 3D (must be > 0).
    #[error("geometry is not realizable: {what} = {measure}")]
    NotRealizable { what: &'static str, measure: f64 },

    #[error("cosine {value} is outside [-1, 1] beyond tolerance")]
    CosineOutOfRange { value: f64 },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not positive definite (pivot or minor {value} at order {order})")]
    NotPositiveDefinite { order: usize, value: f64 },

    #[error("basis matrix is singular")]
    SingularBasis,

    #[error("mixed matrix is singular")]
    SingularMixed,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("coordinates are on the {found} frame, expected {expected}")]
    FrameMismatch { expected: &'static str, found: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not supported here (only 2 and 3)")]
    UnsupportedDimension(usize),

    #[error("index {index} out of range for dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },

    #[error("primal angles are degenerate: {what} = {value}")]
    DegenerateAlpha { what: &'static str, value: f64 },

    #[error("no degenerate-branch candidate satisfies both column identities (best residual {best})")]
    Unresolvable { best: f64 },

    #[error("problem carries no dual angles or lengths")]
    MissingDualData,

    #[error("no acceptable random basis after {attempts} draws")]
    GenerationExhausted { attempts: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable code, used by the command-line front-end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPositiveLength { .. } => "NON_POSITIVE_LENGTH",
            Error::AngleOutOfRange { .. } => "ANGLE_OUT_OF_RANGE",
            Error::NotRealizable { .. } => "NOT_REALIZABLE",
            Error::CosineOutOfRange { .. } => "COSINE_OUT_OF_RANGE",
            Error::NotSymmetric { .. } => "NOT_SYMMETRIC",
            Error::NotPositiveDefinite { .. } => "NOT_POSITIVE_DEFINITE",
            Error::SingularBasis => "SINGULAR_BASIS",
            Error::SingularMixed => "SINGULAR_MIXED",
            Error::SingularMatrix => "SINGULAR_MATRIX",
            Error::FrameMismatch { .. } => "FRAME_MISMATCH",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::UnsupportedDimension(_) => "UNSUPPORTED_DIMENSION",
            Error::InvalidIndex { .. } => "INVALID_INDEX",
            Error::DegenerateAlpha { .. } => "DEGENERATE_ALPHA",
            Error::Unresolvable { .. } => "UNRESOLVABLE",
            Error::MissingDualData => "MISSING_DUAL_DATA",
            Error::GenerationExhausted { .. } => "GENERATION_EXHAUSTED",
            Error::InvalidConfig(_) => "INVALID_CONFIG",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
