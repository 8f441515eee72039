//! Mutually reciprocal bases (`a_i . a*_j = delta_ij`, i.e. `Q = I`).

use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances;
use crate::types::{clamp_cosine, pairs, BasisGeometry, BasisMatrix, PairAngles};

/// A geometry, its reciprocal, and `cos(g_ii)` between matching vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalPair {
    pub primal: BasisGeometry,
    pub dual: BasisGeometry,
    pub gamma_diag: Vec<f64>,
}

impl ReciprocalPair {
    /// `|a_i| |a*_i| cos(g_ii) - 1` per index.
    pub fn normalization_residuals(&self) -> Vec<f64> {
        (0..self.primal.dim())
            .map(|i| self.primal.lengths()[i] * self.dual.lengths()[i] * self.gamma_diag[i] - 1.0)
            .collect()
    }

    /// Dual angles in `(0, pi)`, pair storage order.
    pub fn beta(&self) -> &[f64] {
        self.dual.angles().values()
    }

    pub fn cos_beta(&self) -> &[f64] {
        self.dual.angles().cosines()
    }
}

/// `A* = (A^-1)^T`.
pub fn reciprocal_basis(a: &BasisMatrix) -> Result<BasisMatrix> {
    let inv = linalg::inverse(a.matrix()).map_err(|_| Error::SingularBasis)?;
    BasisMatrix::new(inv.transpose())
}

/// 2D reciprocal cell: `|a*_i| = 1 / (|a_i| sin a12)`, `cos b12 = -cos a12`,
/// `cos g_ii = sin a12`.
pub fn reciprocal_geometry_2d(g: &BasisGeometry) -> Result<ReciprocalPair> {
    g.validate()?;
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: g.dim() });
    }
    let s = g.angles().sin(0, 1);
    let l = g.lengths();
    let dual_lengths = vec![1.0 / (l[0] * s), 1.0 / (l[1] * s)];
    let beta = PairAngles::from_cosines(2, &[-g.angles().cos(0, 1)])?;
    Ok(ReciprocalPair { primal: g.clone(), dual: BasisGeometry::new(dual_lengths, beta)?, gamma_diag: vec![s, s] })
}

/// For each dual vector `i`, the pair `(j, k)` of the other two indices:
/// `|a*_i| = sin(a_jk) / (|a_i| sqrt(delta))`.
const OPPOSITE_PAIR: [(usize, (usize, usize)); 3] = [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))];

/// For each dual pair `(i, j)`, the remaining index `k`:
/// `cos b_ij = (cos a_ik cos a_jk - cos a_ij) / (sin a_ik sin a_jk)`.
const PAIR_COMPLEMENT: [((usize, usize), usize); 3] = [((0, 1), 2), ((0, 2), 1), ((1, 2), 0)];

/// 3D reciprocal cell from lengths and angles.
pub fn reciprocal_geometry_3d(g: &BasisGeometry) -> Result<ReciprocalPair> {
    g.validate()?;
    if g.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: g.dim() });
    }
    let al = g.angles();
    let root_delta = al.realizability().sqrt();
    for &(i, j) in pairs(3) {
        let s = al.sin(i, j);
        if s <= tolerances::DEGENERATE_ALPHA {
            return Err(Error::DegenerateAlpha { what: "sin(a_jk)", value: s });
        }
    }
    let l = g.lengths();
    let mut dual_lengths = vec![0.0; 3];
    let mut gamma_diag = vec![0.0; 3];
    for &(i, (j, k)) in &OPPOSITE_PAIR {
        dual_lengths[i] = al.sin(j, k) / (l[i] * root_delta);
        gamma_diag[i] = root_delta / al.sin(j, k);
    }
    // sin(b_ij) = sqrt(delta) / (sin a_ik sin a_jk), so the angle itself is
    // taken from atan2; cosines near +-1 would lose it.
    let mut beta = vec![0.0; 3];
    for (slot, &((i, j), k)) in PAIR_COMPLEMENT.iter().enumerate() {
        debug_assert_eq!(pairs(3)[slot], (i, j));
        let cos_b = clamp_cosine((al.cos(i, k) * al.cos(j, k) - al.cos(i, j)) / (al.sin(i, k) * al.sin(j, k)))?;
        let sin_b = root_delta / (al.sin(i, k) * al.sin(j, k));
        beta[slot] = sin_b.atan2(cos_b);
    }
    Ok(ReciprocalPair {
        primal: g.clone(),
        dual: BasisGeometry::new(dual_lengths, PairAngles::new(3, beta)?)?,
        gamma_diag,
    })
}

/// Dispatches on the dimension of `g`.
pub fn reciprocal_geometry(g: &BasisGeometry) -> Result<ReciprocalPair> {
    match g.dim() {
        2 => reciprocal_geometry_2d(g),
        3 => reciprocal_geometry_3d(g),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::metric::{build_metric, cell_volume, cholesky_factor, gram_from_basis, mixed_from_bases};
    use crate::types::geometry_from_metric;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

    /// Cholesky -> inverse transpose -> Gram -> lengths and angles.
    fn oracle(g: &BasisGeometry) -> BasisGeometry {
        let a = cholesky_factor(&build_metric(g).unwrap()).unwrap();
        let a_star = reciprocal_basis(&a).unwrap();
        geometry_from_metric(&gram_from_basis(&a_star).unwrap()).unwrap()
    }

    fn assert_matches_oracle(pair: &ReciprocalPair, tol: f64) {
        let want = oracle(&pair.primal);
        for (x, y) in pair.dual.lengths().iter().zip(want.lengths()) {
            assert!((x - y).abs() < tol, "length {x} vs {y}");
        }
        for (x, y) in pair.cos_beta().iter().zip(want.angles().cosines()) {
            assert!((x - y).abs() < tol, "cos beta {x} vs {y}");
        }
        for r in pair.normalization_residuals() {
            assert!(r.abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_basis_cases() {
        assert_eq!(reciprocal_basis(&BasisMatrix::identity(3)).unwrap(), BasisMatrix::identity(3));
        let t: f64 = 0.9;
        let rot = BasisMatrix::new(Matrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])).unwrap();
        let r = reciprocal_basis(&rot).unwrap();
        assert!(linalg::max_abs(&(r.matrix() - rot.matrix())) < 1e-15);
        let a =
            BasisMatrix::new(Matrix::from_row_slice(3, 3, &[1.0, 0.4, 0.1, 0.0, 1.2, -0.3, 0.2, 0.1, 0.8])).unwrap();
        let q = mixed_from_bases(&a, &reciprocal_basis(&a).unwrap()).unwrap();
        assert!(linalg::max_abs(&(q.matrix() - Matrix::identity(3, 3))) < 1e-14);
    }

    #[test]
    fn square_and_hexagonal() {
        let sq = reciprocal_geometry_2d(&BasisGeometry::from_parts(&[1.0, 1.0], &[FRAC_PI_2]).unwrap()).unwrap();
        assert!(sq.dual.lengths().iter().all(|l| (l - 1.0).abs() < 1e-15));
        assert!((sq.beta()[0] - FRAC_PI_2).abs() < 1e-15);

        let hex = reciprocal_geometry_2d(&BasisGeometry::from_parts(&[1.0, 1.0], &[2.0 * FRAC_PI_3]).unwrap()).unwrap();
        assert!(hex.dual.lengths().iter().all(|l| (l - 2.0 / 3.0_f64.sqrt()).abs() < 1e-15));
        assert!((hex.beta()[0] - FRAC_PI_3).abs() < 1e-15);
        assert_matches_oracle(&hex, 1e-14);
    }

    #[test]
    fn oblique_2d() {
        let p = reciprocal_geometry_2d(&BasisGeometry::from_parts(&[2.0, 3.0], &[FRAC_PI_6]).unwrap()).unwrap();
        assert!((p.dual.lengths()[0] - 1.0).abs() < 1e-15);
        assert!((p.dual.lengths()[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.beta()[0] - 5.0 * FRAC_PI_6).abs() < 1e-15);
        assert_matches_oracle(&p, 1e-14);
    }

    #[test]
    fn cubic_and_rhombohedral() {
        let cube = reciprocal_geometry_3d(&BasisGeometry::from_parts(&[1.0; 3], &[FRAC_PI_2; 3]).unwrap()).unwrap();
        assert!(cube.dual.lengths().iter().all(|l| (l - 1.0).abs() < 1e-15));
        assert!(cube.beta().iter().all(|b| (b - FRAC_PI_2).abs() < 1e-15));
        assert!(cube.gamma_diag.iter().all(|c| (c - 1.0).abs() < 1e-15));

        let rh = reciprocal_geometry_3d(&BasisGeometry::from_parts(&[1.0; 3], &[FRAC_PI_3; 3]).unwrap()).unwrap();
        let want_len = 6.0_f64.sqrt() / 2.0;
        assert!(rh.dual.lengths().iter().all(|l| (l - want_len).abs() < 1e-14));
        assert!(rh.cos_beta().iter().all(|c| (c + 1.0 / 3.0).abs() < 1e-15));
        assert!(rh.beta().iter().all(|b| (b - 1.9106332362490186).abs() < 1e-12));
        assert_matches_oracle(&rh, 1e-14);
    }

    #[test]
    fn asymmetric_index_pattern() {
        let g = BasisGeometry::from_parts(&[1.0, 2.0, 3.0], &[FRAC_PI_2, FRAC_PI_2, FRAC_PI_3]).unwrap();
        let p = reciprocal_geometry_3d(&g).unwrap();
        let rd = 0.75_f64.sqrt();
        assert!((p.dual.lengths()[0] - 1.0).abs() < 1e-15);
        assert!((p.dual.lengths()[1] - 1.0 / (2.0 * rd)).abs() < 1e-15);
        assert!((p.dual.lengths()[2] - 1.0 / (3.0 * rd)).abs() < 1e-15);
        assert_matches_oracle(&p, 1e-14);

        // Volume reciprocity.
        let v = cell_volume(&p.primal).unwrap() * cell_volume(&p.dual).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_guard() {
        let g2 = BasisGeometry::from_parts(&[1.0, 1.0], &[1.0]).unwrap();
        assert!(matches!(reciprocal_geometry_3d(&g2), Err(Error::DimensionMismatch { .. })));
        assert!(reciprocal_geometry(&g2).is_ok());
    }
}
