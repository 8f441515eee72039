//! Consistency of a user-supplied (G, G*, Q) triple: a triple taken from two
//! real bases passes, (I, I, 2I) does not.

use dualbasis::metric::{gram_from_basis, mixed_from_bases};
use dualbasis::types::{BasisMatrix, MetricMatrix, MixedMatrix};
use dualbasis::verify::check_configuration;

fn main() -> dualbasis::Result<()> {
    let a = BasisMatrix::from_columns(&[vec![1.0, 0.3], vec![-0.2, 0.8]])?;
    let a_star = BasisMatrix::from_columns(&[vec![0.5, 0.5], vec![0.1, 1.3]])?;
    let good =
        check_configuration(&gram_from_basis(&a)?, &gram_from_basis(&a_star)?, &mixed_from_bases(&a, &a_star)?, 1e-9)?;
    println!("from bases:\n{}", good.to_json());

    let i = MetricMatrix::identity(2);
    let two = MixedMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]])?;
    let bad = check_configuration(&i, &i, &two, 1e-9)?;
    println!("(I, I, 2I):\n{}", bad.to_json());
    Ok(())
}
