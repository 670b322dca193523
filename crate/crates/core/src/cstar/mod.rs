//! Finite-dimensional C*-algebras realized inside full matrix algebras:
//! fiber algebras, group actions, crossed products and their
//! representations.

mod action;
mod algebra;
mod crossed;
mod iso;
mod linalg;
mod rep;
mod scalar;

pub use action::{implementing_unitary, is_unitary_action, ActionDatum, Automorphism, UnitaryActionDatum, UnitaryOutcome};
pub use algebra::{AxiomFailure, ConcreteAlgebra, FiberAlgebra, StructureTable, Summand};
pub use crossed::CrossedProduct;
pub use iso::{
    check_exterior_equivalence, exterior_equivalence_iso, stone_von_neumann, stone_von_neumann_torsor, unitary_tensor_iso,
    verify_star_isomorphism, CrossedIso, IsoCheck, IsoFailure,
};
pub use linalg::{nullspace, rank, rref, unvectorize, vectorize};
pub use rep::{conjugated, intertwiner_space, spectrum_enumerate, Intertwiners, Representation, Spectrum};
pub use scalar::{
    approx_eq, c, is_unitary, max_abs_diff, one, root_of_unity, scalar_part, zero, CMat, CVec, PhaseComparator, C64, DEFAULT_TOLERANCE,
};
