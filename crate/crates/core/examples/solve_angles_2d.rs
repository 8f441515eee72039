//! Recovers the angle between two primal vectors from the four gamma
//! cosines, on a generic configuration and on a degenerate one where the
//! closed form breaks down.

use dualbasis::identities::{beta12_2d, residual_2d, solve_alpha_2d, AngleProblem};
use dualbasis::metric::{gram_from_basis, mixed_from_bases};
use dualbasis::types::{gammas_from_mixed, geometry_from_metric, BasisMatrix, GammaMatrix, PairAngles};

fn gammas(a: &BasisMatrix, a_star: &BasisMatrix) -> dualbasis::Result<GammaMatrix> {
    let p = geometry_from_metric(&gram_from_basis(a)?)?;
    let d = geometry_from_metric(&gram_from_basis(a_star)?)?;
    gammas_from_mixed(&mixed_from_bases(a, a_star)?, p.lengths(), d.lengths())
}

fn report(label: &str, truth: f64, gamma: &GammaMatrix) -> dualbasis::Result<()> {
    let sol = solve_alpha_2d(gamma)?;
    let p = AngleProblem::new(PairAngles::from_cosines(2, &[sol.cos_alpha])?, gamma.clone())?;
    println!("{label}: branch {}, denominator {:.3e}", sol.branch.name(), sol.denominator);
    println!("  cos a12 = {:.15} (true {truth:.15})", sol.cos_alpha);
    println!("  cos b12 = {:.15}", beta12_2d(&p)?);
    println!("  residuals {:.2e} {:.2e}", residual_2d(&p, 0)?, residual_2d(&p, 1)?);
    for c in &sol.candidates {
        println!(
            "    {:<8} cos {:>18.15}  residuals {:.2e} {:.2e}",
            c.label, c.cos_alpha, c.residuals[0], c.residuals[1]
        );
    }
    Ok(())
}

fn main() -> dualbasis::Result<()> {
    let a = BasisMatrix::from_columns(&[vec![1.0, 0.0], vec![0.5, 1.2]])?;
    let a_star = BasisMatrix::from_columns(&[vec![0.9, 0.4], vec![-0.3, 1.0]])?;
    let truth = geometry_from_metric(&gram_from_basis(&a)?)?.angles().cos(0, 1);
    report("generic", truth, &gammas(&a, &a_star)?)?;

    // Orthonormal primal, dual vectors at t and pi/2 - t: the denominator
    // vanishes and the cos(g11 +- g21) fallback takes over.
    let t: f64 = 0.3;
    let a = BasisMatrix::identity(2);
    let a_star = BasisMatrix::from_columns(&[vec![t.cos(), t.sin()], vec![2.0 * t.sin(), 2.0 * t.cos()]])?;
    report("degenerate", 0.0, &gammas(&a, &a_star)?)?;
    Ok(())
}
