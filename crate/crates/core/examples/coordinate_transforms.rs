//! Moves one vector between two bases by the three equivalent routes and
//! evaluates its squared norm four ways.

use dualbasis::metric::{
    dual_metric, gram_from_basis, mixed_from_bases, quadratic_norm, to_orthonormal, transform_coords, TransformContext,
};
use dualbasis::types::{BasisMatrix, CoordinateVector, Frame};

fn main() -> dualbasis::Result<()> {
    let a = BasisMatrix::from_columns(&[vec![1.0, 0.0, 0.0], vec![0.4, 0.9, 0.0], vec![0.2, 0.3, 1.1]])?;
    let a_star = BasisMatrix::from_columns(&[vec![0.7, 0.2, 0.1], vec![-0.3, 1.0, 0.2], vec![0.1, -0.2, 0.8]])?;
    let g = gram_from_basis(&a)?;
    let q = mixed_from_bases(&a, &a_star)?;
    let g_star = dual_metric(&g, &q)?;

    let x = CoordinateVector::new(vec![0.25, -1.0, 0.5], Frame::Primal);
    let routes = [
        ("A*^-1 A x", TransformContext::Bases { primal: &a, dual: &a_star }),
        ("Q^-1 G x", TransformContext::PrimalMetric { metric: &g, mixed: &q }),
        ("G*^-1 Q^T x", TransformContext::DualMetric { metric: &g_star, mixed: &q }),
    ];
    let mut x_star = None;
    for (name, ctx) in &routes {
        let y = transform_coords(&x, ctx)?;
        println!("{name:<12} {:?}", y.coords);
        x_star.get_or_insert(y);
    }
    let x_star = x_star.expect("three routes");

    let r = to_orthonormal(&x, &a)?;
    let r_star = to_orthonormal(&x_star, &a_star)?;
    println!("r from x  {:?}\nr from x* {:?}", r.coords, r_star.coords);

    let norms = quadratic_norm(&x.coords, &x_star.coords, &g, &g_star, &q)?;
    println!("x.G.x, x*.G*.x*, x.Q.x*, x*.Q^T.x = {norms:?}");
    Ok(())
}
