//! Metric of a second basis from the first metric and the mixed matrix:
//! `G* = Q^T G^-1 Q`, and back again with `G = Q G*^-1 Q^T`.

use dualbasis::linalg::rel_max_diff;
use dualbasis::metric::{dual_metric, gram_from_basis, mixed_from_bases, primal_metric};
use dualbasis::types::{gammas_from_mixed, geometry_from_metric, BasisMatrix};

fn main() -> dualbasis::Result<()> {
    let a = BasisMatrix::from_columns(&[vec![1.0, 0.2, 0.0], vec![0.3, 1.1, -0.2], vec![0.0, 0.4, 0.9]])?;
    let a_star = BasisMatrix::from_columns(&[vec![0.8, -0.1, 0.3], vec![0.2, 0.7, 0.5], vec![-0.4, 0.1, 1.2]])?;

    let g = gram_from_basis(&a)?;
    let q = mixed_from_bases(&a, &a_star)?;
    let g_star = dual_metric(&g, &q)?;
    println!("G* from (G, Q) =\n{:.9}", g_star.matrix());
    println!("direct A*^T A* =\n{:.9}", gram_from_basis(&a_star)?.matrix());
    println!("inverse identity error {:.3e}", rel_max_diff(primal_metric(&g_star, &q)?.matrix(), g.matrix()));

    // The gamma angles: cosines between a_i and a*_j.
    let primal = geometry_from_metric(&g)?;
    let dual = geometry_from_metric(&g_star)?;
    let gamma = gammas_from_mixed(&q, primal.lengths(), dual.lengths())?;
    println!("cos(gamma) =\n{:.6}", gamma.matrix());
    Ok(())
}
