//! Exact computer algebra for A∞-algebras, bar constructions and
//! Maurer–Cartan deformation functors over artinian DG bases.

pub mod ainfty;
pub mod artin;
pub mod bar;
pub mod error;
pub mod exec;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod mc;
pub mod properties;
pub mod random;
pub mod signs;
pub mod transfer;
pub mod twist;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{Field, Scalar};
