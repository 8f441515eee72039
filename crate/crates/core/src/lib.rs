// Validation is written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod metric;
pub mod reciprocal;
pub mod tolerances;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
