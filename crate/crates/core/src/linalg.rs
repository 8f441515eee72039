//! Small dense kernels on `DMatrix<f64>`.
//!
//! Sizes up to 3 use closed forms (cofactor expansion, adjugate inverse,
//! trigonometric symmetric eigenvalues). Larger matrices fall back to LU or
//! Cholesky.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tolerances;

pub type Matrix = DMatrix<f64>;

pub fn det(m: &Matrix) -> f64 {
    debug_assert!(m.is_square());
    match m.nrows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => m.clone().lu().determinant(),
    }
}

/// Transposed cofactor matrix for n <= 3.
fn adjugate(m: &Matrix) -> Matrix {
    let n = m.nrows();
    match n {
        1 => Matrix::from_element(1, 1, 1.0),
        2 => Matrix::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]]),
        3 => {
            let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
            Matrix::from_row_slice(
                3,
                3,
                &[
                    c(1, 2, 1, 2),
                    -c(0, 2, 1, 2),
                    c(0, 1, 1, 2),
                    -c(1, 2, 0, 2),
                    c(0, 2, 0, 2),
                    -c(0, 1, 0, 2),
                    c(1, 2, 0, 1),
                    -c(0, 2, 0, 1),
                    c(0, 1, 0, 1),
                ],
            )
        }
        _ => unreachable!("adjugate is only used for n <= 3"),
    }
}

/// `|det m|` is small compared with the Hadamard bound (product of column norms).
pub fn is_singular(m: &Matrix) -> bool {
    let bound: f64 = m.column_iter().map(|c| c.norm()).product();
    if bound == 0.0 || !bound.is_finite() {
        return true;
    }
    let d = det(m);
    !d.is_finite() || d.abs() <= tolerances::SINGULAR_RELATIVE_DET * bound
}

/// General inverse: adjugate for n <= 3, LU otherwise.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if is_singular(m) {
        return Err(Error::SingularMatrix);
    }
    if m.nrows() <= 3 {
        Ok(adjugate(m) / det(m))
    } else {
        m.clone().lu().try_inverse().ok_or(Error::SingularMatrix)
    }
}

/// Inverse of a symmetric positive-definite matrix: adjugate for n <= 3,
/// Cholesky solve otherwise.
pub fn spd_inverse(m: &Matrix) -> Result<Matrix> {
    if m.nrows() <= 3 {
        return inverse(m);
    }
    let upper = cholesky_upper(m)?;
    let n = m.nrows();
    // G^-1 = B^-1 B^-T with B upper triangular.
    let b_inv = upper.solve_upper_triangular(&Matrix::identity(n, n)).ok_or(Error::SingularMatrix)?;
    Ok(&b_inv * b_inv.transpose())
}

/// Upper-triangular `B` with positive diagonal and `B^T B = g`.
pub fn cholesky_upper(g: &Matrix) -> Result<Matrix> {
    let n = g.nrows();
    let mut b = Matrix::zeros(n, n);
    for k in 0..n {
        let pivot = g[(k, k)] - (0..k).map(|i| b[(i, k)] * b[(i, k)]).sum::<f64>();
        if !(pivot > tolerances::CHOLESKY_PIVOT * g[(k, k)].abs()) {
            return Err(Error::NotPositiveDefinite { order: k + 1, value: pivot });
        }
        let d = pivot.sqrt();
        b[(k, k)] = d;
        for j in k + 1..n {
            let s = g[(k, j)] - (0..k).map(|i| b[(i, k)] * b[(i, j)]).sum::<f64>();
            b[(k, j)] = s / d;
        }
    }
    Ok(b)
}

/// Leading principal minors, orders 1..=n.
pub fn leading_minors(m: &Matrix) -> Vec<f64> {
    let n = m.nrows();
    if n <= 3 {
        return (1..=n).map(|k| det(&m.view((0, 0), (k, k)).into_owned())).collect();
    }
    // Elimination without pivoting; the k-th minor is the product of the
    // first k pivots. Stops once a pivot vanishes.
    let mut a = m.clone();
    let mut minors = Vec::with_capacity(n);
    let mut acc = 1.0;
    for k in 0..n {
        let p = a[(k, k)];
        acc *= p;
        minors.push(acc);
        if p == 0.0 {
            minors.resize(n, 0.0);
            break;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / p;
            for j in k..n {
                a[(i, j)] -= f * a[(k, j)];
            }
        }
    }
    minors
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `max |a - b| / max |reference|`, falling back to the absolute difference
/// when the reference is zero.
pub fn rel_max_diff(a: &Matrix, reference: &Matrix) -> f64 {
    let diff = max_abs(&(a - reference));
    let scale = max_abs(reference);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Eigenvalues of a symmetric 1x1, 2x2 or 3x3 matrix in descending order.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    match m.nrows() {
        1 => Ok(vec![m[(0, 0)]]),
        2 => {
            let (a, b, d) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
            let mean = 0.5 * (a + d);
            let r = (0.5 * (a - d)).hypot(b);
            Ok(vec![mean + r, mean - r])
        }
        3 => {
            let off = m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2);
            let mut ev = if off == 0.0 {
                vec![m[(0, 0)], m[(1, 1)], m[(2, 2)]]
            } else {
                let q = m.trace() / 3.0;
                let p2 = (m[(0, 0)] - q).powi(2) + (m[(1, 1)] - q).powi(2) + (m[(2, 2)] - q).powi(2) + 2.0 * off;
                let p = (p2 / 6.0).sqrt();
                let shifted = (m - Matrix::identity(3, 3) * q) / p;
                let r = (det(&shifted) / 2.0).clamp(-1.0, 1.0);
                let phi = r.acos() / 3.0;
                let e1 = q + 2.0 * p * phi.cos();
                let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
                vec![e1, 3.0 * q - e1 - e3, e3]
            };
            ev.sort_by(|x, y| y.total_cmp(x));
            Ok(ev)
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// Spectral (2-norm) condition number for n <= 3, from the eigenvalues of
/// `m^T m`. The smallest eigenvalue is recovered as `det(m)^2` divided by
/// the others, which keeps it accurate when `m` is ill-conditioned.
pub fn condition_number(m: &Matrix) -> Result<f64> {
    let n = m.nrows();
    let ev = symmetric_eigenvalues(&(m.transpose() * m))?;
    let d = det(m);
    if d == 0.0 {
        return Ok(f64::INFINITY);
    }
    let largest = ev[0];
    let smallest = if n == 1 {
        ev[0]
    } else {
        let others: f64 = ev[..n - 1].iter().product();
        d * d / others
    };
    Ok((largest / smallest).sqrt())
}
