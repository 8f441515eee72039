//! Randomized numeric verification of the two-basis identities.
//!
//! Each trial draws explicit bases, derives every matrix and angle from
//! them, and records how far each identity is from holding. Four trial
//! families are run:
//!
//! * `general`: independent random `A` and `A*`;
//! * `orthonormal`: `A` orthonormalized, `A*` random (`G = I`);
//! * `reciprocal`: `A*` the reciprocal of `A` (`Q = I`);
//! * `degenerate` (2D only): orthonormal `A` with `A*` arranged so the
//!   closed-form angle solver hits its vanishing denominator.
//!
//! # Random source
//!
//! Matrices come from ChaCha20 (`rand_chacha::ChaCha20Rng`), seeded with
//! `seed_from_u64(seed)` and positioned on stream `draw_index`, so any draw
//! can be replayed in isolation. A uniform `f64` in `[0, 1)` is the top 53
//! bits of `next_u64()` scaled by `2^-53`; entries are mapped to `[-1, 1)`.
//! Draw indices pack `family << 56 | trial << 4 | slot`.

use std::collections::BTreeMap;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{
    beta12_2d, beta_3d, cos_betas, orthonormal_beta, orthonormal_residual, residual, solve_alpha_2d, swap_inverse,
    AngleProblem,
};
use crate::linalg::{self, Matrix};
use crate::metric::{
    cell_volume, cholesky_factor, dual_metric, dual_metric_raw, gram_from_basis, mixed_from_bases, primal_metric,
    primal_metric_raw, quadratic_norm, to_orthonormal, transform_coords, TransformContext,
};
use crate::reciprocal::{reciprocal_basis, reciprocal_geometry};
use crate::tolerances;
use crate::types::{
    geometry_from_metric, pairs, BasisGeometry, BasisMatrix, CoordinateVector, Frame, GammaMatrix, MetricMatrix,
    MixedMatrix, PairAngles,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub dimension: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub condition_limit: f64,
}

impl TrialConfig {
    pub fn new(dimension: usize, trials: usize, seed: u64, tolerance: f64, condition_limit: f64) -> Result<Self> {
        let cfg = Self { dimension, trials, seed, tolerance, condition_limit };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::UnsupportedDimension(self.dimension));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if !(self.condition_limit > 1.0) {
            return Err(Error::InvalidConfig("condition limit must exceed 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityStats {
    /// Trials in which the identity was evaluated.
    pub trials: usize,
    pub max_residual: f64,
    /// Lowest trial index attaining `max_residual`.
    pub trial_index: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<TrialConfig>,
    pub tolerance: f64,
    pub pass: bool,
    pub identities: BTreeMap<String, IdentityStats>,
}

impl VerificationReport {
    pub fn get(&self, name: &str) -> Option<&IdentityStats> {
        self.identities.get(name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn from_trials(config: Option<TrialConfig>, tolerance: f64, trials: Vec<Vec<(String, f64)>>) -> Self {
        let mut identities: BTreeMap<String, IdentityStats> = BTreeMap::new();
        for (index, records) in trials.into_iter().enumerate() {
            for (name, value) in records {
                // Non-finite residuals cannot go through JSON; saturate them.
                let value = if value.is_finite() { value.abs() } else { f64::MAX };
                let entry = identities.entry(name).or_insert(IdentityStats {
                    trials: 0,
                    max_residual: value,
                    trial_index: index,
                    pass: true,
                });
                entry.trials += 1;
                if value > entry.max_residual {
                    entry.max_residual = value;
                    entry.trial_index = index;
                }
            }
        }
        for stats in identities.values_mut() {
            stats.pass = stats.max_residual <= tolerance;
        }
        let pass = identities.values().all(|s| s.pass);
        Self { config, tolerance, pass, identities }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    General = 0,
    Orthonormal = 1,
    Reciprocal = 2,
    Degenerate = 3,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::Orthonormal => "orthonormal",
            Family::Reciprocal => "reciprocal",
            Family::Degenerate => "degenerate",
        }
    }

    fn for_dimension(n: usize) -> &'static [Family] {
        if n == 2 {
            &[Family::General, Family::Orthonormal, Family::Reciprocal, Family::Degenerate]
        } else {
            &[Family::General, Family::Orthonormal, Family::Reciprocal]
        }
    }

    fn from_prefix(name: &str) -> Option<Family> {
        let prefix = name.split('.').next()?;
        [Family::General, Family::Orthonormal, Family::Reciprocal, Family::Degenerate]
            .into_iter()
            .find(|f| f.prefix() == prefix)
    }
}

pub fn draw_index(family: Family, trial: usize, slot: u64) -> u64 {
    ((family as u64) << 56) | ((trial as u64) << 4) | slot
}

fn stream(seed: u64, draw_index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(draw_index);
    rng
}

fn unit(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn symmetric_unit(rng: &mut ChaCha20Rng) -> f64 {
    2.0 * unit(rng) - 1.0
}

/// A basis with entries uniform in `[-1, 1)`, redrawn until its 2-norm
/// condition number is at most `condition_limit` and `|det| >= 1e-3`.
pub fn random_basis(dimension: usize, seed: u64, draw_index: u64, condition_limit: f64) -> Result<BasisMatrix> {
    if dimension != 2 && dimension != 3 {
        return Err(Error::UnsupportedDimension(dimension));
    }
    let mut rng = stream(seed, draw_index);
    for _ in 0..tolerances::GENERATION_BUDGET {
        let m = Matrix::from_fn(dimension, dimension, |_, _| symmetric_unit(&mut rng));
        if linalg::det(&m).abs() < tolerances::MIN_RANDOM_DET {
            continue;
        }
        if linalg::condition_number(&m)? <= condition_limit {
            return BasisMatrix::new(m);
        }
    }
    Err(Error::GenerationExhausted { attempts: tolerances::GENERATION_BUDGET })
}

fn random_vector(dimension: usize, seed: u64, draw_index: u64) -> Vec<f64> {
    let mut rng = stream(seed, draw_index);
    (0..dimension).map(|_| symmetric_unit(&mut rng)).collect()
}

/// Modified Gram-Schmidt on the columns, applied twice.
pub fn orthonormalize(a: &BasisMatrix) -> Result<BasisMatrix> {
    let mut m = a.matrix().clone();
    for _ in 0..2 {
        for j in 0..m.ncols() {
            for k in 0..j {
                let proj = m.column(k).dot(&m.column(j));
                let ck = m.column(k).into_owned();
                m.column_mut(j).axpy(-proj, &ck, 1.0);
            }
            let norm = m.column(j).norm();
            m.column_mut(j).unscale_mut(norm);
        }
    }
    BasisMatrix::new(m)
}

/// 2D pair whose gamma matrix makes the closed-form solver's denominator
/// vanish: an orthonormal primal frame rotated by `phi`, and dual vectors
/// at angles `t` and `pi/2 - t` from it with random lengths. The true
/// `cos(a12)` is 0.
pub fn degenerate_pair_2d(seed: u64, trial: usize) -> Result<(BasisMatrix, BasisMatrix)> {
    let mut rng = stream(seed, draw_index(Family::Degenerate, trial, 0));
    let phi = std::f64::consts::TAU * unit(&mut rng);
    let t = 0.1 + 0.55 * unit(&mut rng);
    let l1 = 0.5 + 1.5 * unit(&mut rng);
    let l2 = 0.5 + 1.5 * unit(&mut rng);
    let rot = |v: [f64; 2]| [phi.cos() * v[0] - phi.sin() * v[1], phi.sin() * v[0] + phi.cos() * v[1]];
    let e1 = rot([1.0, 0.0]);
    let e2 = rot([0.0, 1.0]);
    let u = rot([l1 * t.cos(), l1 * t.sin()]);
    let v = rot([l2 * t.sin(), l2 * t.cos()]);
    Ok((BasisMatrix::from_columns(&[e1.to_vec(), e2.to_vec()])?, BasisMatrix::from_columns(&[u.to_vec(), v.to_vec()])?))
}

/// The bases of trial `trial` in `family`.
pub fn trial_bases(cfg: &TrialConfig, family: Family, trial: usize) -> Result<(BasisMatrix, BasisMatrix)> {
    let n = cfg.dimension;
    let draw = |slot| random_basis(n, cfg.seed, draw_index(family, trial, slot), cfg.condition_limit);
    match family {
        Family::General => Ok((draw(0)?, draw(1)?)),
        Family::Orthonormal => Ok((orthonormalize(&draw(0)?)?, draw(1)?)),
        Family::Reciprocal => {
            let a = draw(0)?;
            let a_star = reciprocal_basis(&a)?;
            Ok((a, a_star))
        }
        Family::Degenerate => degenerate_pair_2d(cfg.seed, trial),
    }
}

struct Records {
    family: Family,
    items: Vec<(String, f64)>,
}

impl Records {
    fn new(family: Family) -> Self {
        Self { family, items: Vec::new() }
    }

    fn push(&mut self, name: &str, value: f64) {
        self.items.push((format!("{}.{}", self.family.prefix(), name), value));
    }
}

/// `cos` of the angle between columns `i` and `j` of a metric.
fn metric_cos(g: &MetricMatrix, i: usize, j: usize) -> f64 {
    let m = g.matrix();
    m[(i, j)] / (m[(i, i)] * m[(j, j)]).sqrt()
}

fn general_records(a: &BasisMatrix, a_star: &BasisMatrix, x: &[f64], out: &mut Records) -> Result<()> {
    let n = a.dim();
    let g = gram_from_basis(a)?;
    let gs = gram_from_basis(a_star)?;
    let q = mixed_from_bases(a, a_star)?;

    out.push("central_identity", linalg::rel_max_diff(&dual_metric_raw(g.matrix(), q.matrix())?, gs.matrix()));
    out.push("inverse_identity", linalg::rel_max_diff(&primal_metric_raw(gs.matrix(), q.matrix())?, g.matrix()));
    let there_and_back = primal_metric(&dual_metric(&g, &q)?, &q)?;
    let back_and_there = dual_metric(&primal_metric(&gs, &q)?, &q)?;
    out.push(
        "metric_round_trip",
        linalg::rel_max_diff(there_and_back.matrix(), g.matrix())
            .max(linalg::rel_max_diff(back_and_there.matrix(), gs.matrix())),
    );
    let b = cholesky_factor(&g)?;
    out.push("cholesky_round_trip", linalg::rel_max_diff(&(b.matrix().transpose() * b.matrix()), g.matrix()));

    let p = AngleProblem::from_bases(a, a_star)?;
    for col in 0..n {
        out.push(&format!("residual_col{}", col + 1), residual(&p, col)?);
    }
    let betas = cos_betas(&p)?;
    let beta_err =
        pairs(n).iter().zip(&betas).map(|(&(i, j), c)| (c - metric_cos(&gs, i, j)).abs()).fold(0.0, f64::max);
    out.push("beta_formula", beta_err);

    let swapped = swap_inverse(&p)?;
    for col in 0..n {
        out.push(&format!("swap_residual_col{}", col + 1), residual(&swapped, col)?);
    }
    let swap_beta_err = pairs(n)
        .iter()
        .zip(cos_betas(&swapped)?)
        .map(|(&(i, j), c)| (c - metric_cos(&g, i, j)).abs())
        .fold(0.0, f64::max);
    out.push("swap_beta_formula", swap_beta_err);
    out.push("swap_involution", if swap_inverse(&swapped)? == p { 0.0 } else { 1.0 });

    if n == 2 {
        let sol = solve_alpha_2d(p.gamma())?;
        if sol.denominator.abs() >= 0.1 {
            out.push("alpha_solver_generic", sol.cos_alpha - metric_cos(&g, 0, 1));
        }
    }

    // Coordinates: three routes to x*, and four forms of r.r.
    let xv = CoordinateVector::new(x.to_vec(), Frame::Primal);
    let routes = [
        TransformContext::Bases { primal: a, dual: a_star },
        TransformContext::PrimalMetric { metric: &g, mixed: &q },
        TransformContext::DualMetric { metric: &gs, mixed: &q },
    ];
    let outs = routes.iter().map(|c| transform_coords(&xv, c)).collect::<Result<Vec<_>>>()?;
    let scale = outs[0].coords.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut spread = 0.0_f64;
    for u in &outs {
        for v in &outs {
            for k in 0..n {
                spread = spread.max((u.coords[k] - v.coords[k]).abs());
            }
        }
    }
    out.push("transform_routes", if scale > 0.0 { spread / scale } else { spread });

    let r = to_orthonormal(&xv, a)?;
    let rr: f64 = r.coords.iter().map(|v| v * v).sum();
    let forms = quadratic_norm(x, &outs[0].coords, &g, &gs, &q)?;
    let dev = forms.iter().map(|f| (f - rr).abs()).fold(0.0, f64::max);
    out.push("quadratic_norm", if rr > 0.0 { dev / rr } else { dev });
    Ok(())
}

fn orthonormal_records(a: &BasisMatrix, a_star: &BasisMatrix, out: &mut Records) -> Result<()> {
    let n = a.dim();
    let p = AngleProblem::from_bases(a, a_star)?;
    let gs = gram_from_basis(a_star)?;
    let gamma = p.gamma();
    // The same gamma against exactly orthogonal primal angles.
    let right = PairAngles::from_cosines(n, &vec![0.0; pairs(n).len()])?;
    let special = AngleProblem::new(right, gamma.clone())?;

    let mut col_err = 0.0_f64;
    let mut special_res = 0.0_f64;
    for col in 0..n {
        let r = orthonormal_residual(gamma, col)?;
        col_err = col_err.max(r.abs());
        special_res = special_res.max((residual(&special, col)? - r).abs());
    }
    out.push("direction_cosine_sum", col_err);
    out.push("specialization_residual", special_res);

    let mut beta_err = 0.0_f64;
    let mut special_beta = 0.0_f64;
    for &(i, j) in pairs(n) {
        let ob = orthonormal_beta(gamma, (i, j))?;
        beta_err = beta_err.max((ob - metric_cos(&gs, i, j)).abs());
        let general = if n == 2 { beta12_2d(&special)? } else { beta_3d(&special, (i, j))? };
        special_beta = special_beta.max((general - ob).abs());
    }
    out.push("orthonormal_beta", beta_err);
    out.push("specialization_beta", special_beta);
    Ok(())
}

fn geometry_gap(x: &BasisGeometry, y: &BasisGeometry) -> (f64, f64) {
    let len = x.lengths().iter().zip(y.lengths()).map(|(a, b)| ((a - b) / b).abs()).fold(0.0, f64::max);
    let cos = x.angles().cosines().iter().zip(y.angles().cosines()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    (len, cos)
}

fn reciprocal_records(a: &BasisMatrix, a_star: &BasisMatrix, x: &[f64], out: &mut Records) -> Result<()> {
    let n = a.dim();
    let g = gram_from_basis(a)?;
    let primal = geometry_from_metric(&g)?;
    let pair = reciprocal_geometry(&primal)?;
    let oracle = geometry_from_metric(&gram_from_basis(a_star)?)?;
    let (len_gap, cos_gap) = geometry_gap(&pair.dual, &oracle);
    out.push("reciprocal_lengths", len_gap);
    out.push("reciprocal_cosines", cos_gap);
    out.push("normalization", pair.normalization_residuals().iter().fold(0.0_f64, |m, r| m.max(r.abs())));
    let q = mixed_from_bases(a, a_star)?;
    out.push("mixed_is_identity", linalg::max_abs(&(q.matrix() - Matrix::identity(n, n))));
    if n == 2 {
        out.push("beta_is_minus_alpha", (pair.cos_beta()[0] + primal.angles().cos(0, 1)).abs());
    }
    out.push("volume_reciprocity", cell_volume(&pair.primal)? * cell_volume(&pair.dual)? - 1.0);

    let twice = reciprocal_geometry(&pair.dual)?;
    let (len_back, cos_back) = geometry_gap(&twice.dual, &primal);
    out.push("involution", len_back.max(cos_back));

    // r.r = x . x* when Q = I.
    let xv = CoordinateVector::new(x.to_vec(), Frame::Primal);
    let x_star = transform_coords(&xv, &TransformContext::Bases { primal: a, dual: a_star })?;
    let r = to_orthonormal(&xv, a)?;
    let rr: f64 = r.coords.iter().map(|v| v * v).sum();
    let dot: f64 = x.iter().zip(&x_star.coords).map(|(u, v)| u * v).sum();
    out.push("norm_form", if rr > 0.0 { (dot - rr) / rr } else { dot - rr });
    Ok(())
}

fn degenerate_records(a: &BasisMatrix, a_star: &BasisMatrix, out: &mut Records) -> Result<()> {
    let p = AngleProblem::from_bases(a, a_star)?;
    let sol = solve_alpha_2d(p.gamma())?;
    out.push("fallback_branch", if sol.branch == crate::identities::Branch::Degenerate { 0.0 } else { 1.0 });
    let gamma: &GammaMatrix = p.gamma();
    let at = AngleProblem::new(PairAngles::from_cosines(2, &[sol.cos_alpha])?, gamma.clone())?;
    let worst = (0..2).map(|c| residual(&at, c).map(f64::abs)).collect::<Result<Vec<_>>>()?;
    out.push("fallback_residual", worst.into_iter().fold(0.0, f64::max));
    out.push("fallback_recovery", sol.cos_alpha);
    Ok(())
}

fn evaluate(cfg: &TrialConfig, family: Family, trial: usize) -> Result<Vec<(String, f64)>> {
    let (a, a_star) = trial_bases(cfg, family, trial)?;
    let x = random_vector(cfg.dimension, cfg.seed, draw_index(family, trial, 2));
    let mut out = Records::new(family);
    match family {
        Family::General => general_records(&a, &a_star, &x, &mut out)?,
        Family::Orthonormal => orthonormal_records(&a, &a_star, &mut out)?,
        Family::Reciprocal => reciprocal_records(&a, &a_star, &x, &mut out)?,
        Family::Degenerate => degenerate_records(&a, &a_star, &mut out)?,
    }
    Ok(out.items)
}

/// Runs every trial family for `cfg.trials` trials each and aggregates the
/// per-identity maxima. Trials run in parallel; the report is identical to
/// a sequential run.
pub fn verify_identities(cfg: &TrialConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let per_trial: Vec<Vec<(String, f64)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut all = Vec::new();
            for &family in Family::for_dimension(cfg.dimension) {
                all.extend(evaluate(cfg, family, t)?);
            }
            Ok(all)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_trials(Some(cfg.clone()), cfg.tolerance, per_trial))
}

/// Runs only the general-family identities on caller-supplied bases.
pub fn verify_pairs<F>(cfg: &TrialConfig, source: F) -> Result<VerificationReport>
where
    F: Fn(usize) -> Result<(BasisMatrix, BasisMatrix)> + Sync,
{
    cfg.validate()?;
    let per_trial: Vec<Vec<(String, f64)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let (a, a_star) = source(t)?;
            let x = random_vector(cfg.dimension, cfg.seed, draw_index(Family::General, t, 2));
            let mut out = Records::new(Family::General);
            general_records(&a, &a_star, &x, &mut out)?;
            Ok(out.items)
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_trials(Some(cfg.clone()), cfg.tolerance, per_trial))
}

/// Re-evaluates one identity on one trial. `None` if the identity was not
/// evaluated in that trial.
pub fn replay(cfg: &TrialConfig, identity: &str, trial: usize) -> Result<Option<f64>> {
    let family =
        Family::from_prefix(identity).ok_or_else(|| Error::InvalidConfig(format!("unknown identity {identity}")))?;
    Ok(evaluate(cfg, family, trial)?.into_iter().find(|(name, _)| name == identity).map(|(_, v)| {
        if v.is_finite() {
            v.abs()
        } else {
            f64::MAX
        }
    }))
}

/// Checks whether user-supplied `G`, `G*` and `Q` are mutually consistent.
pub fn check_configuration(
    g: &MetricMatrix,
    g_star: &MetricMatrix,
    q: &MixedMatrix,
    tolerance: f64,
) -> Result<VerificationReport> {
    let n = g.dim();
    for found in [g_star.dim(), q.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let central = linalg::rel_max_diff(&dual_metric_raw(g.matrix(), q.matrix())?, g_star.matrix());
    let inverse = linalg::rel_max_diff(&primal_metric_raw(g_star.matrix(), q.matrix())?, g.matrix());
    let trial = vec![("central_identity".to_string(), central), ("inverse_identity".to_string(), inverse)];
    Ok(VerificationReport::from_trials(None, tolerance, vec![trial]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, trials: usize) -> TrialConfig {
        TrialConfig::new(n, trials, 7, 1e-8, 1e3).unwrap()
    }

    #[test]
    fn random_basis_is_deterministic_and_guarded() {
        for n in [2, 3] {
            for idx in 0..50 {
                let a = random_basis(n, 11, idx, 1e3).unwrap();
                let b = random_basis(n, 11, idx, 1e3).unwrap();
                assert_eq!(a, b);
                assert!(a.det().abs() >= 1e-3);
                assert!(linalg::condition_number(a.matrix()).unwrap() <= 1e3);
                assert!(a.matrix().iter().all(|v| (-1.0..1.0).contains(v)));
            }
            assert_ne!(random_basis(n, 11, 0, 1e3).unwrap(), random_basis(n, 11, 1, 1e3).unwrap());
        }
    }

    #[test]
    fn config_validation() {
        assert!(matches!(TrialConfig::new(4, 1, 0, 1e-8, 1e3), Err(Error::UnsupportedDimension(4))));
        assert!(TrialConfig::new(2, 0, 0, 1e-8, 1e3).is_err());
        assert!(TrialConfig::new(2, 1, 0, 0.0, 1e3).is_err());
        assert!(TrialConfig::new(2, 1, 0, 1e-8, 1.0).is_err());
    }

    #[test]
    fn identity_pair_has_zero_residuals() {
        let report = verify_pairs(&cfg(2, 1), |_| Ok((BasisMatrix::identity(2), BasisMatrix::identity(2)))).unwrap();
        assert!(report.pass);
        for (name, stats) in &report.identities {
            assert_eq!(stats.max_residual, 0.0, "{name}");
        }
    }

    #[test]
    fn small_runs_pass() {
        for n in [2, 3] {
            let report = verify_identities(&cfg(n, 200)).unwrap();
            assert!(report.pass, "{}", report.to_json());
        }
    }

    #[test]
    fn impossible_tolerance_fails() {
        let c = TrialConfig::new(3, 50, 1, 1e-16, 1e3).unwrap();
        let report = verify_identities(&c).unwrap();
        assert!(!report.pass);
        assert!(report.get("general.central_identity").unwrap().max_residual > 0.0);
    }

    #[test]
    fn argmax_replays() {
        let c = cfg(3, 100);
        let report = verify_identities(&c).unwrap();
        for (name, stats) in &report.identities {
            let again = replay(&c, name, stats.trial_index).unwrap().unwrap();
            assert_eq!(again, stats.max_residual, "{name}");
        }
    }

    #[test]
    fn check_configuration_cases() {
        let i = MetricMatrix::identity(3);
        let ok = check_configuration(&i, &i, &MixedMatrix::identity(3), 1e-9).unwrap();
        assert!(ok.pass);
        let two = MixedMatrix::new(Matrix::identity(3, 3) * 2.0).unwrap();
        let bad = check_configuration(&i, &i, &two, 1e-9).unwrap();
        assert!(!bad.pass);
        assert!((bad.get("central_identity").unwrap().max_residual - 3.0).abs() < 1e-15);
        assert!(matches!(
            check_configuration(&MetricMatrix::identity(2), &i, &two, 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn report_round_trips_through_json() {
        let report = verify_identities(&cfg(2, 20)).unwrap();
        let back: VerificationReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
