//! The 3D column identities and dual-angle formulas on a random pair of
//! bases, the orthonormal specialization, and the primal/dual swap.

use dualbasis::identities::{
    cos_betas, orthonormal_beta, orthonormal_residual, residual_3d, swap_inverse, AngleProblem,
};
use dualbasis::metric::{gram_from_basis, mixed_from_bases};
use dualbasis::types::{gammas_from_mixed, geometry_from_metric, pairs};
use dualbasis::verify::{orthonormalize, random_basis};

fn main() -> dualbasis::Result<()> {
    let a = random_basis(3, 2024, 0, 1e3)?;
    let a_star = random_basis(3, 2024, 1, 1e3)?;
    let p = AngleProblem::from_bases(&a, &a_star)?;

    for col in 0..3 {
        println!("column {} residual {:.3e}", col + 1, residual_3d(&p, col)?);
    }
    let extracted = p.beta().expect("dual data").cosines().to_vec();
    println!("cos beta from identities {:?}", cos_betas(&p)?);
    println!("cos beta from A*^T A*    {extracted:?}");

    let swapped = swap_inverse(&p)?;
    println!("swapped residuals {:?}", (0..3).map(|c| residual_3d(&swapped, c)).collect::<Result<Vec<_>, _>>()?);
    println!("swap twice is identity: {}", swap_inverse(&swapped)? == p);

    // G = I: the gammas are direction cosines.
    let e = orthonormalize(&a)?;
    let gs = gram_from_basis(&a_star)?;
    let dual = geometry_from_metric(&gs)?;
    let gamma = gammas_from_mixed(&mixed_from_bases(&e, &a_star)?, &[1.0; 3], dual.lengths())?;
    for col in 0..3 {
        println!("direction cosines of a*_{} sum to 1 {:+.3e}", col + 1, orthonormal_residual(&gamma, col)?);
    }
    for &(i, j) in pairs(3) {
        println!("cos b{}{} = {:.12}", i + 1, j + 1, orthonormal_beta(&gamma, (i, j))?);
    }
    Ok(())
}
