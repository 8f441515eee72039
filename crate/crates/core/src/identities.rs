//! Angle identities between two basis sets.
//!
//! Every identity here is the entrywise reading of `G* = Q^T G^-1 Q` once
//! lengths are factored out: the diagonal gives a consistency residual per
//! column of the gamma matrix, the off-diagonal gives the dual angles. The
//! orthonormal (`G = I`) forms and the primal/dual role swap are included.

use crate::error::{Error, Result};
use crate::metric::{gram_from_basis, mixed_from_bases, DeltaOmega};
use crate::tolerances;
use crate::types::{
    clamp_cosine, gammas_from_mixed, geometry_from_metric, pairs, BasisMatrix, GammaMatrix, PairAngles,
};

#[derive(Debug, Clone, PartialEq)]
struct DualData {
    beta: PairAngles,
    primal_lengths: Vec<f64>,
    dual_lengths: Vec<f64>,
}

/// Primal angles, the gamma cosines and optionally the dual angles and both
/// length sets.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleProblem {
    alpha: PairAngles,
    gamma: GammaMatrix,
    dual: Option<DualData>,
}

impl AngleProblem {
    pub fn new(alpha: PairAngles, gamma: GammaMatrix) -> Result<Self> {
        if alpha.dim() != gamma.dim() {
            return Err(Error::DimensionMismatch { expected: alpha.dim(), found: gamma.dim() });
        }
        alpha.check_realizable()?;
        Ok(Self { alpha, gamma, dual: None })
    }

    pub fn with_dual(mut self, beta: PairAngles, primal_lengths: Vec<f64>, dual_lengths: Vec<f64>) -> Result<Self> {
        let n = self.dim();
        for found in [beta.dim(), primal_lengths.len(), dual_lengths.len()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        for lens in [&primal_lengths, &dual_lengths] {
            if let Some((index, &value)) = lens.iter().enumerate().find(|(_, l)| !(**l > 0.0)) {
                return Err(Error::NonPositiveLength { index, value });
            }
        }
        beta.check_realizable()?;
        self.dual = Some(DualData { beta, primal_lengths, dual_lengths });
        Ok(self)
    }

    /// Extracts every angle and length from two explicit bases.
    pub fn from_bases(a: &BasisMatrix, a_star: &BasisMatrix) -> Result<Self> {
        let primal = geometry_from_metric(&gram_from_basis(a)?)?;
        let dual = geometry_from_metric(&gram_from_basis(a_star)?)?;
        let q = mixed_from_bases(a, a_star)?;
        let gamma = gammas_from_mixed(&q, primal.lengths(), dual.lengths())?;
        Self::new(primal.angles().clone(), gamma)?.with_dual(
            dual.angles().clone(),
            primal.lengths().to_vec(),
            dual.lengths().to_vec(),
        )
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn alpha(&self) -> &PairAngles {
        &self.alpha
    }

    pub fn gamma(&self) -> &GammaMatrix {
        &self.gamma
    }

    pub fn beta(&self) -> Option<&PairAngles> {
        self.dual.as_ref().map(|d| &d.beta)
    }

    pub fn primal_lengths(&self) -> Option<&[f64]> {
        self.dual.as_ref().map(|d| d.primal_lengths.as_slice())
    }

    pub fn dual_lengths(&self) -> Option<&[f64]> {
        self.dual.as_ref().map(|d| d.dual_lengths.as_slice())
    }

    fn require_dim(&self, n: usize) -> Result<()> {
        if self.dim() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, found: self.dim() })
        }
    }

    fn delta_omega(&self) -> DeltaOmega {
        DeltaOmega::from_cosines(self.alpha.cos(0, 1), self.alpha.cos(0, 2), self.alpha.cos(1, 2))
    }
}

fn check_index(index: usize, dim: usize) -> Result<()> {
    if index < dim {
        Ok(())
    } else {
        Err(Error::InvalidIndex { index, dim })
    }
}

fn check_pair(pair: (usize, usize), dim: usize) -> Result<()> {
    check_index(pair.0, dim)?;
    check_index(pair.1, dim)?;
    if pair.0 == pair.1 {
        return Err(Error::InvalidIndex { index: pair.1, dim });
    }
    Ok(())
}

fn column_residual_2d(gamma: &GammaMatrix, cos_a: f64, sin2_a: f64, column: usize) -> f64 {
    let c1 = gamma.cos(0, column);
    let c2 = gamma.cos(1, column);
    c1 * c1 + c2 * c2 - 2.0 * cos_a * c1 * c2 - sin2_a
}

/// `cos^2(g1j) + cos^2(g2j) - 2 cos(a12) cos(g1j) cos(g2j) - sin^2(a12)`
/// for the zero-based `column` j. Vanishes for every realizable pair.
pub fn residual_2d(p: &AngleProblem, column: usize) -> Result<f64> {
    p.require_dim(2)?;
    check_index(column, 2)?;
    Ok(column_residual_2d(&p.gamma, p.alpha.cos(0, 1), p.alpha.sin(0, 1).powi(2), column))
}

fn beta12_2d_raw(gamma: &GammaMatrix, cos_a: f64, sin2_a: f64) -> Result<f64> {
    if sin2_a <= tolerances::DEGENERATE_ALPHA {
        return Err(Error::DegenerateAlpha { what: "sin^2(a12)", value: sin2_a });
    }
    let (c11, c12, c21, c22) = (gamma.cos(0, 0), gamma.cos(0, 1), gamma.cos(1, 0), gamma.cos(1, 1));
    Ok((c11 * c12 + c21 * c22 - cos_a * (c11 * c22 + c12 * c21)) / sin2_a)
}

/// `cos(b12)` from the primal angle and the gamma cosines (2D).
pub fn beta12_2d(p: &AngleProblem) -> Result<f64> {
    p.require_dim(2)?;
    clamp_cosine(beta12_2d_raw(&p.gamma, p.alpha.cos(0, 1), p.alpha.sin(0, 1).powi(2))?)
}

/// Which formula produced a 2D solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Closed-form quotient.
    Generic,
    /// `cos(g11 +- g21)` / `cos(g22 +- g12)` fallback.
    Degenerate,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Generic => "generic",
            Branch::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCandidate {
    pub label: &'static str,
    pub cos_alpha: f64,
    /// Column residuals evaluated at this candidate.
    pub residuals: [f64; 2],
}

impl AlphaCandidate {
    fn worst(&self) -> f64 {
        self.residuals[0].abs().max(self.residuals[1].abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub cos_alpha: f64,
    pub branch: Branch,
    pub numerator: f64,
    pub denominator: f64,
    /// All four fallback candidates, reported on both branches.
    pub candidates: Vec<AlphaCandidate>,
}

impl AlphaSolution {
    pub fn alpha(&self) -> f64 {
        self.cos_alpha.acos()
    }
}

fn fallback_candidates(gamma: &GammaMatrix) -> Vec<AlphaCandidate> {
    let g = |i, j| gamma.angle(i, j);
    [
        ("g11+g21", g(0, 0) + g(1, 0)),
        ("g11-g21", g(0, 0) - g(1, 0)),
        ("g22+g12", g(1, 1) + g(0, 1)),
        ("g22-g12", g(1, 1) - g(0, 1)),
    ]
    .into_iter()
    .map(|(label, angle)| {
        let c = angle.cos();
        let s2 = 1.0 - c * c;
        AlphaCandidate {
            label,
            cos_alpha: c,
            residuals: [column_residual_2d(gamma, c, s2, 0), column_residual_2d(gamma, c, s2, 1)],
        }
    })
    .collect()
}

fn solve_alpha(gamma: &GammaMatrix, cos_beta: Option<f64>) -> Result<AlphaSolution> {
    if gamma.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: gamma.dim() });
    }
    let (c11, c12, c21, c22) = (gamma.cos(0, 0), gamma.cos(0, 1), gamma.cos(1, 0), gamma.cos(1, 1));
    let numerator = c11 * c11 + c21 * c21 - c12 * c12 - c22 * c22;
    let denominator = 2.0 * (c11 * c21 - c12 * c22);
    let candidates = fallback_candidates(gamma);

    if denominator.abs() > tolerances::DEGENERATE_DENOMINATOR {
        return Ok(AlphaSolution {
            cos_alpha: clamp_cosine(numerator / denominator)?,
            branch: Branch::Generic,
            numerator,
            denominator,
            candidates,
        });
    }

    let best = candidates.iter().map(AlphaCandidate::worst).fold(f64::INFINITY, f64::min);
    if !(best <= tolerances::FALLBACK_RESIDUAL) {
        return Err(Error::Unresolvable { best });
    }
    // Both roots of the shared quadratic zero both residuals, so residuals
    // alone cannot separate them. Prefer agreement with a known dual angle,
    // else the root closest to orthogonal.
    let score = |c: &AlphaCandidate| match cos_beta {
        Some(b) => beta12_2d_raw(gamma, c.cos_alpha, 1.0 - c.cos_alpha * c.cos_alpha)
            .map(|v| (v - b).abs())
            .unwrap_or(f64::INFINITY),
        None => c.cos_alpha.abs(),
    };
    let chosen = candidates
        .iter()
        .filter(|c| c.worst() <= tolerances::FALLBACK_RESIDUAL)
        .min_by(|x, y| score(x).total_cmp(&score(y)))
        .expect("at least one admissible candidate");
    Ok(AlphaSolution {
        cos_alpha: clamp_cosine(chosen.cos_alpha)?,
        branch: Branch::Degenerate,
        numerator,
        denominator,
        candidates,
    })
}

/// Recovers `cos(a12)` from the four gamma cosines of a 2D configuration.
///
/// Uses the closed-form quotient while `|denominator| > 1e-7`. Otherwise the
/// two column identities coincide and the answer is one of
/// `cos(g11 +- g21)`; candidates with column residuals above `1e-8` are
/// discarded and the one with the smallest `|cos a12|` is returned.
pub fn solve_alpha_2d(gamma: &GammaMatrix) -> Result<AlphaSolution> {
    solve_alpha(gamma, None)
}

/// As [`solve_alpha_2d`], but a degenerate-branch tie is broken by
/// agreement with the known `cos(b12)`.
pub fn solve_alpha_2d_with_beta(gamma: &GammaMatrix, cos_beta: f64) -> Result<AlphaSolution> {
    solve_alpha(gamma, Some(cos_beta))
}

/// Sum over `i, k` of the cofactor-weighted products `cos(g_ip) cos(g_kq)`
/// (the bracket of the 3D identities, before division by delta).
fn bracket_3d(gamma: &GammaMatrix, alpha: &PairAngles, dw: &DeltaOmega, p: usize, q: usize) -> f64 {
    let c = |i: usize, j: usize| gamma.cos(i, j);
    let s12 = alpha.sin(0, 1).powi(2);
    let s13 = alpha.sin(0, 2).powi(2);
    let s23 = alpha.sin(1, 2).powi(2);
    let [o1, o2, o3] = dw.omega;
    (c(1, p) * c(2, q) + c(1, q) * c(2, p)) * o1
        + (c(0, p) * c(2, q) + c(0, q) * c(2, p)) * o2
        + (c(0, p) * c(1, q) + c(0, q) * c(1, p)) * o3
        + c(2, p) * c(2, q) * s12
        + c(1, p) * c(1, q) * s13
        + c(0, p) * c(0, q) * s23
}

/// Column identity of the 3D case, `LHS - delta`, for the zero-based `column`.
pub fn residual_3d(p: &AngleProblem, column: usize) -> Result<f64> {
    p.require_dim(3)?;
    check_index(column, 3)?;
    let dw = p.delta_omega();
    Ok(bracket_3d(&p.gamma, &p.alpha, &dw, column, column) - dw.delta)
}

/// `cos(b_ij)` of the dual set for a zero-based pair (3D).
pub fn beta_3d(p: &AngleProblem, pair: (usize, usize)) -> Result<f64> {
    p.require_dim(3)?;
    check_pair(pair, 3)?;
    let dw = p.delta_omega();
    if dw.delta <= tolerances::DEGENERATE_ALPHA {
        return Err(Error::DegenerateAlpha { what: "delta", value: dw.delta });
    }
    clamp_cosine(bracket_3d(&p.gamma, &p.alpha, &dw, pair.0, pair.1) / dw.delta)
}

/// All dual-angle cosines in pair storage order, 2D or 3D.
pub fn cos_betas(p: &AngleProblem) -> Result<Vec<f64>> {
    match p.dim() {
        2 => Ok(vec![beta12_2d(p)?]),
        _ => pairs(3).iter().map(|&pair| beta_3d(p, pair)).collect(),
    }
}

/// Consistency residual of `column` for the current dimension.
pub fn residual(p: &AngleProblem, column: usize) -> Result<f64> {
    match p.dim() {
        2 => residual_2d(p, column),
        _ => residual_3d(p, column),
    }
}

/// With an orthonormal primal set the gamma columns are direction cosines:
/// returns `sum_i cos^2(g_i,column) - 1`.
pub fn orthonormal_residual(gamma: &GammaMatrix, column: usize) -> Result<f64> {
    check_index(column, gamma.dim())?;
    Ok((0..gamma.dim()).map(|i| gamma.cos(i, column).powi(2)).sum::<f64>() - 1.0)
}

/// `cos(b_pq) = sum_i cos(g_ip) cos(g_iq)` for an orthonormal primal set.
pub fn orthonormal_beta(gamma: &GammaMatrix, pair: (usize, usize)) -> Result<f64> {
    check_pair(pair, gamma.dim())?;
    Ok((0..gamma.dim()).map(|i| gamma.cos(i, pair.0) * gamma.cos(i, pair.1)).sum())
}

/// Exchanges the roles of the two sets: lengths and angle sets swap, gamma
/// is transposed. Identities evaluated on the result are those of
/// `G = Q G*^-1 Q^T` on the original.
pub fn swap_inverse(p: &AngleProblem) -> Result<AngleProblem> {
    let dual = p.dual.as_ref().ok_or(Error::MissingDualData)?;
    Ok(AngleProblem {
        alpha: dual.beta.clone(),
        gamma: p.gamma.transpose(),
        dual: Some(DualData {
            beta: p.alpha.clone(),
            primal_lengths: dual.dual_lengths.clone(),
            dual_lengths: dual.primal_lengths.clone(),
        }),
    })
}
