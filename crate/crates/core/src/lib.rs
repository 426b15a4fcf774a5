//! Exact computations with finite-dimensional associative algebras given by
//! structure constants: Peirce decompositions and root gradings of the
//! derived Lie ring `[A, A]`, verification of Lie-map laws, extension of Lie
//! isomorphisms to standard maps, extension of Lie derivations to associative
//! derivations, and the two-idempotent counterexample built on a Grassmann
//! algebra with a nilpotent central generator.

pub mod algebra;
pub mod derivation;
pub mod factory;
pub mod field;
pub mod json;
pub mod lie;
pub mod linalg;
pub mod peirce;
pub mod standard;

pub use algebra::{Algebra, AlgebraError, Element, LinearMap, MatrixShape, StructureConstant};
pub use field::{ArithOp, FieldError, FieldSpec, Scalar};
pub use linalg::{Subspace, Vector};
pub use lie::{LawKind, LieError, MapVerdict};
pub use peirce::{
    delta_grading, h_element, GradedLieRing, HElement, IdempotentFrame, PeirceError, Root, RootSum,
    RootSystem,
};
pub use derivation::{EvenDecomposition, ExtensionAttempt, Obstruction};
pub use factory::{GrassmannZ, GrassmannZSpec, WitnessReport};
pub use standard::{EnvelopePair, StandardDecomposition};
