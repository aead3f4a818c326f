//! Finite quasi-Boolean algebras: validation, canonical quotients,
//! congruences, equational decision and small-model enumeration.

pub mod algebra;
pub mod cli;
pub mod congruences;
pub mod enumeration;
pub mod fixtures;
pub mod partition;
pub mod quotients;
pub mod terms;

pub use algebra::{load_algebra, Element, FiniteAlgebra, ValidationReport};
pub use partition::Partition;
