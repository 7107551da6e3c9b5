//! Constructing compositions, hermitian compositions and the explicit composition over M2((a, b)).

pub mod extend;

pub use extend::{extend_involution, extension_candidates, Extension};
pub mod witness;

pub use witness::{construct_composition, recheck, source_clifford, CompositionWitness, FactorRecipe, WitnessCheck};
pub mod hermitian;

pub use hermitian::{hermitian_from_hom, hom_from_generators, verify_hermitian_identity, HermitianComposition, HermitianVerdict};
pub mod example1;

pub use example1::{example1_reproduce, Example1Bundle};
