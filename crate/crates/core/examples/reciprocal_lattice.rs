//! Reciprocal cells from lengths and angles, checked against the inverse
//! transpose of a Cholesky basis.

use std::f64::consts::FRAC_PI_3;

use dualbasis::metric::{build_metric, cell_volume, cholesky_factor, gram_from_basis};
use dualbasis::reciprocal::{reciprocal_basis, reciprocal_geometry};
use dualbasis::types::{geometry_from_metric, BasisGeometry};

fn show(name: &str, cell: &BasisGeometry) -> dualbasis::Result<()> {
    let pair = reciprocal_geometry(cell)?;
    let deg: Vec<f64> = pair.beta().iter().map(|b| b.to_degrees()).collect();
    println!("{name}");
    println!("  dual lengths {:?}", pair.dual.lengths());
    println!("  dual angles  {deg:?} deg");
    println!("  |a_i||a*_i|cos(g_ii) - 1 = {:?}", pair.normalization_residuals());
    println!("  V V* = {}", cell_volume(cell)? * cell_volume(&pair.dual)?);

    let a_star = reciprocal_basis(&cholesky_factor(&build_metric(cell)?)?)?;
    let oracle = geometry_from_metric(&gram_from_basis(&a_star)?)?;
    println!("  via (A^-1)^T: {:?}", oracle.lengths());
    Ok(())
}

fn main() -> dualbasis::Result<()> {
    show("hexagonal 2D", &BasisGeometry::from_parts(&[1.0, 1.0], &[2.0 * FRAC_PI_3])?)?;
    show("rhombohedral 60 deg", &BasisGeometry::from_parts(&[1.0; 3], &[FRAC_PI_3; 3])?)?;
    let tri = [72.0_f64, 95.0, 104.0].map(f64::to_radians);
    show("triclinic", &BasisGeometry::from_parts(&[4.1, 5.3, 6.0], &tri)?)?;
    Ok(())
}
