//! A∞-algebras, A∞-morphisms and tensor products with DG algebras.

pub mod algebra;
pub mod builtins;
pub mod morphism;
pub mod structure;
pub mod tensor;

pub use algebra::{AInfAlgebra, AlgebraBuilder, AxiomReport, CohomologyAlgebra};
pub use morphism::{AInfMorphism, MorphismReport};
pub use structure::StructureMaps;
pub use tensor::{tensor_index, tensor_space, tensor_split, tensor_vectors, tensor_with_dg};

#[cfg(test)]
mod tests;
