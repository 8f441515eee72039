//! Metric and mixed matrix constructions, the dual/primal metric identities,
//! coordinate transforms between the two bases, and cell volumes.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::types::{
    cosine_delta, BasisGeometry, BasisMatrix, CoordinateVector, Frame, MetricMatrix, MixedMatrix, PairAngles,
};

/// `G_ii = l_i^2`, `G_ij = l_i l_j cos(a_ij)`.
pub fn build_metric(g: &BasisGeometry) -> Result<MetricMatrix> {
    g.validate()?;
    let n = g.dim();
    let l = g.lengths();
    let m = Matrix::from_fn(n, n, |i, j| if i == j { l[i] * l[i] } else { l[i] * l[j] * g.angles().cos(i, j) });
    MetricMatrix::new(m)
}

/// Column dot products `A^T B`, filled so that a Gram product is exactly symmetric.
fn column_products(a: &Matrix, b: &Matrix, symmetric: bool) -> Matrix {
    let n = a.ncols();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if symmetric && j < i {
                out[(i, j)] = out[(j, i)];
            } else {
                out[(i, j)] = a.column(i).dot(&b.column(j));
            }
        }
    }
    out
}

/// `G = A^T A`.
pub fn gram_from_basis(a: &BasisMatrix) -> Result<MetricMatrix> {
    MetricMatrix::new(column_products(a.matrix(), a.matrix(), true))
}

/// `Q = A^T A*`.
pub fn mixed_from_bases(a: &BasisMatrix, a_star: &BasisMatrix) -> Result<MixedMatrix> {
    if a.dim() != a_star.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: a_star.dim() });
    }
    MixedMatrix::new(column_products(a.matrix(), a_star.matrix(), false))
}

/// A basis realizing `G`: the upper-triangular `B` with positive diagonal
/// and `B^T B = G`.
pub fn cholesky_factor(g: &MetricMatrix) -> Result<BasisMatrix> {
    let b = linalg::cholesky_upper(g.matrix())?;
    BasisMatrix::new(b).map_err(|_| Error::NotPositiveDefinite { order: g.dim(), value: 0.0 })
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

/// `Q^T G^-1 Q` without symmetrization or validation.
pub(crate) fn dual_metric_raw(g: &Matrix, q: &Matrix) -> Result<Matrix> {
    let g_inv = linalg::spd_inverse(g)?;
    Ok(q.transpose() * g_inv * q)
}

/// `Q G*^-1 Q^T` without symmetrization or validation.
pub(crate) fn primal_metric_raw(g_star: &Matrix, q: &Matrix) -> Result<Matrix> {
    let inv = linalg::spd_inverse(g_star)?;
    Ok(q * inv * q.transpose())
}

/// Metric of the second basis from the first metric and the mixed matrix:
/// `G* = Q^T G^-1 Q`.
pub fn dual_metric(g: &MetricMatrix, q: &MixedMatrix) -> Result<MetricMatrix> {
    same_dim(g.dim(), q.dim())?;
    MetricMatrix::symmetrized(dual_metric_raw(g.matrix(), q.matrix())?)
}

/// Inverse direction: `G = Q G*^-1 Q^T`.
pub fn primal_metric(g_star: &MetricMatrix, q: &MixedMatrix) -> Result<MetricMatrix> {
    same_dim(g_star.dim(), q.dim())?;
    MetricMatrix::symmetrized(primal_metric_raw(g_star.matrix(), q.matrix())?)
}

/// Matrices available for moving coordinates between the two bases.
#[derive(Debug, Clone, Copy)]
pub enum TransformContext<'a> {
    /// Both basis matrices: `x* = A*^-1 A x`.
    Bases { primal: &'a BasisMatrix, dual: &'a BasisMatrix },
    /// Primal metric and mixed matrix: `x* = Q^-1 G x`.
    PrimalMetric { metric: &'a MetricMatrix, mixed: &'a MixedMatrix },
    /// Dual metric and mixed matrix: `x* = G*^-1 Q^T x`.
    DualMetric { metric: &'a MetricMatrix, mixed: &'a MixedMatrix },
}

impl TransformContext<'_> {
    fn dim(&self) -> usize {
        match self {
            TransformContext::Bases { primal, .. } => primal.dim(),
            TransformContext::PrimalMetric { metric, .. } | TransformContext::DualMetric { metric, .. } => metric.dim(),
        }
    }

    /// The operator mapping primal coordinates to dual coordinates, or the
    /// reverse when `to_dual` is false.
    fn operator(&self, to_dual: bool) -> Result<Matrix> {
        let op = match (*self, to_dual) {
            (TransformContext::Bases { primal, dual }, true) => linalg::inverse(dual.matrix())? * primal.matrix(),
            (TransformContext::Bases { primal, dual }, false) => linalg::inverse(primal.matrix())? * dual.matrix(),
            // G x = Q x*
            (TransformContext::PrimalMetric { metric, mixed }, true) => {
                linalg::inverse(mixed.matrix())? * metric.matrix()
            }
            (TransformContext::PrimalMetric { metric, mixed }, false) => {
                linalg::spd_inverse(metric.matrix())? * mixed.matrix()
            }
            // G* x* = Q^T x
            (TransformContext::DualMetric { metric, mixed }, true) => {
                linalg::spd_inverse(metric.matrix())? * mixed.matrix().transpose()
            }
            (TransformContext::DualMetric { metric, mixed }, false) => {
                linalg::inverse(&mixed.matrix().transpose())? * metric.matrix()
            }
        };
        Ok(op)
    }
}

/// Re-expresses `x` on the other basis. Primal coordinates become dual and
/// vice versa; orthonormal-frame coordinates are rejected.
pub fn transform_coords(x: &CoordinateVector, ctx: &TransformContext<'_>) -> Result<CoordinateVector> {
    let to_dual = match x.frame {
        Frame::Primal => true,
        Frame::Dual => false,
        Frame::Orthonormal => return Err(Error::FrameMismatch { expected: "primal or dual", found: "orthonormal" }),
    };
    same_dim(ctx.dim(), x.dim())?;
    let op = ctx.operator(to_dual)?;
    let out = op * DVector::from_column_slice(&x.coords);
    Ok(CoordinateVector::new(out.iter().copied().collect(), if to_dual { Frame::Dual } else { Frame::Primal }))
}

/// `r = A x`: coordinates on the orthonormal frame.
pub fn to_orthonormal(x: &CoordinateVector, basis: &BasisMatrix) -> Result<CoordinateVector> {
    same_dim(basis.dim(), x.dim())?;
    let r = basis.matrix() * DVector::from_column_slice(&x.coords);
    Ok(CoordinateVector::new(r.iter().copied().collect(), Frame::Orthonormal))
}

fn bilinear(x: &[f64], m: &Matrix, y: &[f64]) -> f64 {
    DVector::from_column_slice(x).dot(&(m * DVector::from_column_slice(y)))
}

/// The squared norm of one vector computed four ways:
/// `x.G.x`, `x*.G*.x*`, `x.Q.x*`, `x*.Q^T.x`.
pub fn quadratic_norm(
    x: &[f64],
    x_star: &[f64],
    g: &MetricMatrix,
    g_star: &MetricMatrix,
    q: &MixedMatrix,
) -> Result<[f64; 4]> {
    let n = g.dim();
    for d in [x.len(), x_star.len(), g_star.dim(), q.dim()] {
        same_dim(n, d)?;
    }
    Ok([
        bilinear(x, g.matrix(), x),
        bilinear(x_star, g_star.matrix(), x_star),
        bilinear(x, q.matrix(), x_star),
        bilinear(x_star, &q.matrix().transpose(), x),
    ])
}

/// Cosine determinant `delta` and the cofactor combinations `omega` of a 3D
/// angle set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaOmega {
    pub delta: f64,
    pub omega: [f64; 3],
}

impl DeltaOmega {
    pub fn from_cosines(c12: f64, c13: f64, c23: f64) -> Self {
        Self { delta: cosine_delta(c12, c13, c23), omega: [c12 * c13 - c23, c12 * c23 - c13, c13 * c23 - c12] }
    }
}

/// Angles in the order `(a12, a13, a23)`, radians.
pub fn delta_omega(angles: &PairAngles) -> Result<DeltaOmega> {
    if angles.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: angles.dim() });
    }
    Ok(DeltaOmega::from_cosines(angles.cos(0, 1), angles.cos(0, 2), angles.cos(1, 2)))
}

/// Area (2D) or volume (3D) spanned by the basis vectors:
/// `|a1||a2| sin(a12)` or `|a1||a2||a3| sqrt(delta)`.
pub fn cell_volume(g: &BasisGeometry) -> Result<f64> {
    g.validate()?;
    let l = g.lengths();
    let a = g.angles();
    Ok(match g.dim() {
        2 => l[0] * l[1] * a.sin(0, 1),
        _ => l[0] * l[1] * l[2] * a.realizability().sqrt(),
    })
}
