//! Domain types: geometric (length/angle) and matrix descriptions of a
//! basis set, the mixed matrix between two sets, and their conversions.
//!
//! Indices are zero-based throughout. Pair angles are stored in the order
//! `(0,1)` for 2D and `(0,1), (0,2), (1,2)` for 3D, which corresponds to the
//! conventional labels `12`, `13`, `23`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tolerances;

/// Index pairs `i < j` in storage order.
pub fn pairs(n: usize) -> &'static [(usize, usize)] {
    match n {
        2 => &[(0, 1)],
        3 => &[(0, 1), (0, 2), (1, 2)],
        _ => &[],
    }
}

/// Conventional one-based label of a pair, e.g. `(0, 2)` -> `"13"`.
pub fn pair_label(i: usize, j: usize) -> String {
    format!("{}{}", i + 1, j + 1)
}

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Clamp a cosine into `[-1, 1]` if it overshoots by at most
/// [`tolerances::COSINE_CLAMP`].
pub fn clamp_cosine(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + tolerances::COSINE_CLAMP {
        Err(Error::CosineOutOfRange { value: x })
    } else {
        Ok(x.clamp(-1.0, 1.0))
    }
}

/// `2 c12 c13 c23 - c12^2 - c13^2 - c23^2 + 1`: the determinant of the
/// unit-diagonal cosine matrix.
pub fn cosine_delta(c12: f64, c13: f64, c23: f64) -> f64 {
    2.0 * c12 * c13 * c23 - c12 * c12 - c13 * c13 - c23 * c23 + 1.0
}

/// The cosine determinant from the angles themselves:
/// `4 sin(s) sin(s - a12) sin(s - a13) sin(s - a23)` with `s` the half sum.
/// Equal to [`cosine_delta`] but free of its cancellation when the three
/// vectors are nearly coplanar.
pub fn angle_delta(a12: f64, a13: f64, a23: f64) -> f64 {
    let half_sin = |x: f64, y: f64, z: f64| {
        // x + y + z carried as hi + lo (error-free sums), then
        // sin((hi + lo) / 2) to first order in lo.
        let (s, e1) = two_sum(x, y);
        let (hi, e2) = two_sum(s, z);
        let (h, l) = (0.5 * hi, 0.5 * (e1 + e2));
        h.sin() + h.cos() * l
    };
    4.0 * half_sin(a12, a13, a23) * half_sin(a13, a23, -a12) * half_sin(a12, a23, -a13) * half_sin(a12, a13, -a23)
}

/// Knuth's error-free sum: `a + b = s + e` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Pairwise angles of a 2D or 3D basis set.
///
/// Radians, cosines and sines are all kept: a set built from cosines uses
/// them verbatim, so exact inputs such as `cos = 0` stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAngles {
    n: usize,
    values: Vec<f64>,
    cosines: Vec<f64>,
    sines: Vec<f64>,
}

impl PairAngles {
    /// Angles in storage order; each must lie strictly inside `(0, pi)`.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::check_shape(n, values.len())?;
        for (&(i, j), &v) in pairs(n).iter().zip(&values) {
            if !(v > 0.0 && v < std::f64::consts::PI) {
                return Err(Error::AngleOutOfRange { pair: pair_label(i, j), value: v });
            }
        }
        // sin(pi/2 - v) equals cos(v) to rounding and is exactly 0 at pi/2.
        let cosines = values.iter().map(|v| (std::f64::consts::FRAC_PI_2 - v).sin()).collect();
        let sines = values.iter().map(|v| v.sin()).collect();
        Ok(Self { n, values, cosines, sines })
    }

    /// Cosines in storage order, clamped within tolerance. A cosine of
    /// exactly `+-1` is a zero or straight angle and is rejected.
    pub fn from_cosines(n: usize, cosines: &[f64]) -> Result<Self> {
        Self::check_shape(n, cosines.len())?;
        let cosines = cosines.iter().map(|&c| clamp_cosine(c)).collect::<Result<Vec<_>>>()?;
        let values: Vec<f64> = cosines.iter().map(|c| c.acos()).collect();
        for (&(i, j), &v) in pairs(n).iter().zip(&values) {
            if !(v > 0.0 && v < std::f64::consts::PI) {
                return Err(Error::AngleOutOfRange { pair: pair_label(i, j), value: v });
            }
        }
        let sines = cosines.iter().map(|c| ((1.0 - c) * (1.0 + c)).sqrt()).collect();
        Ok(Self { n, values, cosines, sines })
    }

    fn check_shape(n: usize, len: usize) -> Result<()> {
        check_dim(n)?;
        let expected = pairs(n).len();
        if len != expected {
            return Err(Error::DimensionMismatch { expected, found: len });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Angle between vectors `i` and `j` (symmetric, `i != j`).
    pub fn get(&self, i: usize, j: usize) -> Result<f64> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        pairs(self.n)
            .iter()
            .position(|&p| p == (a, b))
            .map(|k| self.values[k])
            .ok_or(Error::InvalidIndex { index: i.max(j), dim: self.n })
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        pairs(self.n)
            .iter()
            .position(|&p| p == (a, b))
            .unwrap_or_else(|| panic!("pair ({i}, {j}) outside dimension {}", self.n))
    }

    /// Panics if `(i, j)` is not a pair of this dimension.
    pub fn cos(&self, i: usize, j: usize) -> f64 {
        self.cosines[self.slot(i, j)]
    }

    /// Panics if `(i, j)` is not a pair of this dimension.
    pub fn sin(&self, i: usize, j: usize) -> f64 {
        self.sines[self.slot(i, j)]
    }

    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    /// Unit-length metric: ones on the diagonal, pair cosines elsewhere.
    pub fn cosine_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| if i == j { 1.0 } else { self.cos(i, j) })
    }

    /// Realizability measure: `sin^2(a12)` in 2D, the cosine determinant
    /// (evaluated by [`angle_delta`]) in 3D.
    pub fn realizability(&self) -> f64 {
        match self.n {
            2 => self.sin(0, 1).powi(2),
            _ => angle_delta(self.values[0], self.values[1], self.values[2]),
        }
    }

    /// Fails with [`Error::NotRealizable`] unless the angles describe
    /// linearly independent unit vectors.
    pub fn check_realizable(&self) -> Result<()> {
        match self.n {
            2 => {
                let c = self.cos(0, 1).abs();
                if c < 1.0 {
                    Ok(())
                } else {
                    Err(Error::NotRealizable { what: "|cos a12|", measure: c })
                }
            }
            _ => {
                let delta = self.realizability();
                if delta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::NotRealizable { what: "delta", measure: delta })
                }
            }
        }
    }
}

/// Lengths and pairwise angles of one basis set.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisGeometry {
    lengths: Vec<f64>,
    angles: PairAngles,
}

impl BasisGeometry {
    pub fn new(lengths: Vec<f64>, angles: PairAngles) -> Result<Self> {
        let g = Self { lengths, angles };
        g.validate()?;
        Ok(g)
    }

    /// Convenience constructor from plain slices (angles in storage order).
    pub fn from_parts(lengths: &[f64], angles: &[f64]) -> Result<Self> {
        let angles = PairAngles::new(lengths.len(), angles.to_vec())?;
        Self::new(lengths.to_vec(), angles)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.lengths.len();
        check_dim(n)?;
        if self.angles.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.angles.dim() });
        }
        for (index, &value) in self.lengths.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveLength { index, value });
            }
        }
        self.angles.check_realizable()
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn angles(&self) -> &PairAngles {
        &self.angles
    }
}

/// Checked pass-through: returns the geometry unchanged if valid.
pub fn validate_geometry(g: BasisGeometry) -> Result<BasisGeometry> {
    g.validate()?;
    Ok(g)
}

/// Columns are basis-vector coordinates on the orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix(Matrix);

impl BasisMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if linalg::is_singular(&m) {
            return Err(Error::SingularBasis);
        }
        Ok(Self(m))
    }

    /// One slice per basis vector.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.len();
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::new(Matrix::from_fn(n, n, |i, j| columns[j][i]))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        self.0.column_iter().map(|c| c.iter().copied().collect()).collect()
    }

    pub fn det(&self) -> f64 {
        linalg::det(&self.0)
    }
}

/// Symmetric positive-definite Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix(Matrix);

impl MetricMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let n = m.nrows();
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            if !(m[(i, i)] > 0.0) {
                return Err(Error::NotPositiveDefinite { order: i + 1, value: m[(i, i)] });
            }
        }
        for (k, minor) in linalg::leading_minors(&m).into_iter().enumerate() {
            if !(minor > 0.0) {
                return Err(Error::NotPositiveDefinite { order: k + 1, value: minor });
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    /// Validates after replacing `m` by `(m + m^T) / 2`.
    pub fn symmetrized(m: Matrix) -> Result<Self> {
        let s = (&m + m.transpose()) * 0.5;
        Self::new(s)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// `Q_ij = a_i . a*_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedMatrix(Matrix);

impl MixedMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        if linalg::is_singular(&m) {
            return Err(Error::SingularMixed);
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n, n))
    }

    /// Builds `Q_ij = |a_i| |a*_j| cos(g_ij)`.
    pub fn from_gammas(gamma: &GammaMatrix, primal_lengths: &[f64], dual_lengths: &[f64]) -> Result<Self> {
        let n = gamma.dim();
        for lens in [primal_lengths, dual_lengths] {
            if lens.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: lens.len() });
            }
        }
        Self::new(Matrix::from_fn(n, n, |i, j| primal_lengths[i] * dual_lengths[j] * gamma.cos(i, j)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Cosines of the angles between `a_i` and `a*_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix(Matrix);

impl GammaMatrix {
    pub fn new(cosines: Matrix) -> Result<Self> {
        if !cosines.is_square() {
            return Err(Error::DimensionMismatch { expected: cosines.nrows(), found: cosines.ncols() });
        }
        if let Some(&bad) = cosines.iter().find(|c| !(c.abs() <= 1.0)) {
            return Err(Error::CosineOutOfRange { value: bad });
        }
        Ok(Self(cosines))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn cos(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Angle in `[0, pi]`.
    pub fn angle(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)].acos()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

/// Which basis a coordinate tuple refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Orthonormal,
    Primal,
    Dual,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Orthonormal => "orthonormal",
            Frame::Primal => "primal",
            Frame::Dual => "dual",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateVector {
    pub coords: Vec<f64>,
    pub frame: Frame,
}

impl CoordinateVector {
    pub fn new(coords: Vec<f64>, frame: Frame) -> Self {
        Self { coords, frame }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
    }
    Ok(Matrix::from_fn(n, m, |i, j| rows[i][j]))
}

pub(crate) fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Recovers lengths `sqrt(G_ii)` and angles `arccos(G_ij / (l_i l_j))`.
pub fn geometry_from_metric(g: &MetricMatrix) -> Result<BasisGeometry> {
    let n = g.dim();
    check_dim(n)?;
    let m = g.matrix();
    let lengths: Vec<f64> = (0..n).map(|i| m[(i, i)].sqrt()).collect();
    let cosines: Vec<f64> = pairs(n).iter().map(|&(i, j)| m[(i, j)] / (lengths[i] * lengths[j])).collect();
    BasisGeometry::new(lengths, PairAngles::from_cosines(n, &cosines)?)
}

/// `cos(g_ij) = Q_ij / (|a_i| |a*_j|)`, clamped within tolerance.
pub fn gammas_from_mixed(q: &MixedMatrix, primal_lengths: &[f64], dual_lengths: &[f64]) -> Result<GammaMatrix> {
    let n = q.dim();
    for lens in [primal_lengths, dual_lengths] {
        if lens.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: lens.len() });
        }
        if let Some((index, &value)) = lens.iter().enumerate().find(|(_, l)| !(**l > 0.0)) {
            return Err(Error::NonPositiveLength { index, value });
        }
    }
    let mut cos = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            cos[(i, j)] = clamp_cosine(q.matrix()[(i, j)] / (primal_lengths[i] * dual_lengths[j]))?;
        }
    }
    GammaMatrix::new(cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn orthonormal_2d_is_valid() {
        let g = BasisGeometry::from_parts(&[1.0, 1.0], &[FRAC_PI_2]).unwrap();
        assert!(validate_geometry(g).is_ok());
    }

    #[test]
    fn equilateral_3d_delta_is_half() {
        let g = BasisGeometry::from_parts(&[1.0; 3], &[FRAC_PI_3; 3]).unwrap();
        let det = linalg::det(&g.angles().cosine_matrix());
        assert!((det - 0.5).abs() < 1e-15);
        assert!((g.angles().realizability() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn angle_delta_matches_cosine_polynomial() {
        for &(a, b, c) in &[(1.0, 1.2, 0.9), (FRAC_PI_2, FRAC_PI_2, FRAC_PI_3), (2.5, 2.0, 1.1), (0.3, 0.4, 0.6)] {
            let want = cosine_delta(f64::cos(a), f64::cos(b), f64::cos(c));
            assert!((angle_delta(a, b, c) - want).abs() < 1e-15, "{a} {b} {c}");
        }
        // Violated triangle inequality and full turn both give delta <= 0.
        assert!(angle_delta(0.1, 0.1, 1.0) < 0.0);
        assert!(angle_delta(2.0, 2.0, 2.3) < 0.0);

        // Nearly flat: a13 ~ a12 + a23. Reference from 40-digit arithmetic
        // on these exact doubles.
        let (a12, a13, a23) = (0.6060436270222372, 1.539492046295162, 0.9334683126885521);
        let want = 1.820498703086769e-5;
        let got = angle_delta(a12, a13, a23);
        assert!(((got - want) / want).abs() < 1e-13, "{got:e} rel {:e}", (got - want) / want);
    }

    #[test]
    fn near_collinear_cell() {
        // (1 - c)^2 (2c + 1) with c = cos(0.01): tiny but still positive in f64.
        let angles = PairAngles::new(3, vec![0.01; 3]).unwrap();
        let c = 0.01_f64.cos();
        let closed = (1.0 - c).powi(2) * (2.0 * c + 1.0);
        let delta = angles.realizability();
        assert!(delta.abs() < 1e-8);
        assert!(((delta - closed) / closed).abs() < 1e-6);
        assert!((cosine_delta(c, c, c) - closed).abs() < 1e-15);
        assert!(BasisGeometry::from_parts(&[1.0; 3], &[0.01; 3]).is_ok());

        // a23 wider than a12 + a13 cannot close.
        let err = BasisGeometry::from_parts(&[1.0; 3], &[0.1, 0.1, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotRealizable { what: "delta", .. }));
    }

    #[test]
    fn geometry_errors() {
        assert!(matches!(
            BasisGeometry::from_parts(&[1.0, 0.0], &[1.0]),
            Err(Error::NonPositiveLength { index: 1, .. })
        ));
        assert!(matches!(BasisGeometry::from_parts(&[1.0, 1.0], &[PI]), Err(Error::AngleOutOfRange { .. })));
        assert!(matches!(BasisGeometry::from_parts(&[1.0, 1.0], &[0.0]), Err(Error::AngleOutOfRange { .. })));
        assert!(matches!(BasisGeometry::from_parts(&[1.0; 4], &[1.0; 6]), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn geometry_from_identity_metric() {
        let g = geometry_from_metric(&MetricMatrix::identity(3)).unwrap();
        assert_eq!(g.lengths(), &[1.0, 1.0, 1.0]);
        for &v in g.angles().values() {
            assert!((v - FRAC_PI_2).abs() < 1e-15);
        }
    }

    #[test]
    fn geometry_from_2x3_metric() {
        let g = MetricMatrix::from_rows(&[vec![4.0, 3.0], vec![3.0, 9.0]]).unwrap();
        let geo = geometry_from_metric(&g).unwrap();
        assert_eq!(geo.lengths(), &[2.0, 3.0]);
        assert!((geo.angles().get(0, 1).unwrap() - FRAC_PI_3).abs() < 1e-15);
    }

    #[test]
    fn cosine_beyond_one_is_rejected() {
        // Passes neither the metric nor the cosine check.
        let raw = Matrix::from_row_slice(2, 2, &[1.0, 1.01, 1.01, 1.0]);
        assert!(matches!(MetricMatrix::new(raw.clone()), Err(Error::NotPositiveDefinite { .. })));
        assert!(matches!(PairAngles::from_cosines(2, &[1.01]), Err(Error::CosineOutOfRange { .. })));
        assert_eq!(clamp_cosine(1.0 + 5e-10).unwrap(), 1.0);
        assert_eq!(clamp_cosine(-1.0 - 5e-10).unwrap(), -1.0);
    }

    #[test]
    fn metric_validation() {
        let asym = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.4, 2.0]);
        assert!(matches!(MetricMatrix::new(asym), Err(Error::NotSymmetric { .. })));
        let neg = Matrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(MetricMatrix::new(neg), Err(Error::NotPositiveDefinite { order: 1, .. })));
    }

    #[test]
    fn gammas_identity_and_reciprocal_scaling() {
        let q = MixedMatrix::identity(2);
        let g = gammas_from_mixed(&q, &[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(g.matrix(), &Matrix::identity(2, 2));
        let g = gammas_from_mixed(&q, &[2.0, 1.0], &[0.5, 1.0]).unwrap();
        assert_eq!(g.cos(0, 0), 1.0);
        assert_eq!(g.cos(1, 1), 1.0);
        assert_eq!(g.angle(0, 0), 0.0);
        assert!(matches!(gammas_from_mixed(&q, &[0.5, 1.0], &[0.5, 1.0]), Err(Error::CosineOutOfRange { .. })));
    }

    #[test]
    fn basis_from_columns_layout() {
        let b = BasisMatrix::from_columns(&[vec![1.0, 0.0], vec![0.5, 2.0]]).unwrap();
        assert_eq!(b.matrix()[(0, 1)], 0.5);
        assert_eq!(b.columns()[1], vec![0.5, 2.0]);
        assert!(matches!(BasisMatrix::from_columns(&[vec![1.0, 2.0], vec![2.0, 4.0]]), Err(Error::SingularBasis)));
    }
}
