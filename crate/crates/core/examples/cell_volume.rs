//! Cell volumes from lengths and angles against the determinant of a
//! realizing basis, with the delta and omega combinations of the 3D case.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use dualbasis::metric::{build_metric, cell_volume, cholesky_factor, delta_omega};
use dualbasis::types::BasisGeometry;

fn main() -> dualbasis::Result<()> {
    let cells = [
        ("cube", BasisGeometry::from_parts(&[2.0; 3], &[FRAC_PI_2; 3])?),
        ("rhombohedral", BasisGeometry::from_parts(&[1.0; 3], &[FRAC_PI_3; 3])?),
        ("triclinic", BasisGeometry::from_parts(&[3.0, 4.0, 5.0], &[1.2, 1.4, 1.9])?),
        ("nearly flat", BasisGeometry::from_parts(&[1.0; 3], &[0.5, 1.0, 1.4999])?),
    ];
    for (name, cell) in &cells {
        let dw = delta_omega(cell.angles())?;
        let det = cholesky_factor(&build_metric(cell)?)?.det();
        println!(
            "{name:<13} V = {:<22} det = {:<22} delta = {:<12.6e} omega = {:.4?}",
            cell_volume(cell)?,
            det,
            dw.delta,
            dw.omega
        );
    }

    // Angles that violate the triangle inequality are rejected.
    let err = BasisGeometry::from_parts(&[1.0; 3], &[0.1, 0.1, 1.0]).unwrap_err();
    println!("0.1/0.1/1.0 rad: {err}");
    Ok(())
}
