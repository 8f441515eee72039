//! Numeric thresholds shared across the crate.
//!
//! All values are for `f64` arithmetic. Identity checks compare a
//! max-norm residual against these bounds.

/// Cosines this far outside `[-1, 1]` are clamped; further out is an error.
pub const COSINE_CLAMP: f64 = 1e-9;

/// Default relative max-norm tolerance for the matrix identities.
pub const IDENTITY: f64 = 1e-9;

/// Below this magnitude the closed-form 2D angle solver switches to the
/// `cos(g11 +- g21)` fallback.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-7;

/// Column residual bound a fallback candidate must meet.
pub const FALLBACK_RESIDUAL: f64 = 1e-8;

/// `sin^2(a12)` (2D) or the cosine determinant (3D) at or below this value
/// makes the dual-angle formulas unusable.
pub const DEGENERATE_ALPHA: f64 = 1e-12;

/// `|det M|` relative to the product of its column norms. Below this a
/// matrix is treated as singular.
pub const SINGULAR_RELATIVE_DET: f64 = 1e-12;

/// A Cholesky pivot relative to its diagonal entry must exceed this.
pub const CHOLESKY_PIVOT: f64 = 1e-14;

/// Default condition-number guard for randomized inputs.
pub const CONDITION_LIMIT: f64 = 1e3;

/// Minimum `|det A|` accepted from the random basis generator.
pub const MIN_RANDOM_DET: f64 = 1e-3;

/// Redraw budget of the random basis generator.
pub const GENERATION_BUDGET: usize = 10_000;
