//! Builds the metric of a monoclinic-like cell from lengths and angles,
//! factors it, and reads the geometry back out of the Gram matrix.

use std::f64::consts::FRAC_PI_2;

use dualbasis::metric::{build_metric, cholesky_factor, gram_from_basis};
use dualbasis::types::{geometry_from_metric, BasisGeometry};

fn main() -> dualbasis::Result<()> {
    let beta = 101.5_f64.to_radians();
    let cell = BasisGeometry::from_parts(&[5.2, 3.9, 7.4], &[FRAC_PI_2, beta, FRAC_PI_2])?;

    let g = build_metric(&cell)?;
    println!("G =\n{:.6}", g.matrix());

    // Upper-triangular realization: columns are basis vectors.
    let b = cholesky_factor(&g)?;
    println!("B =\n{:.6}", b.matrix());

    let back = gram_from_basis(&b)?;
    let err = (back.matrix() - g.matrix()).abs().max();
    println!("max |B^T B - G| = {err:.3e}");

    let recovered = geometry_from_metric(&g)?;
    println!("lengths {:?}", recovered.lengths());
    let degrees: Vec<f64> = recovered.angles().values().iter().map(|a| a.to_degrees()).collect();
    println!("angles  {degrees:?} deg");
    Ok(())
}
