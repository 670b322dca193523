//! Čech cohomology of locally constant sheaves of finite abelian groups on
//! covers described by their nerve up to triple overlaps.

mod complex;
mod cover;
mod presentation;
mod refine;

pub use complex::{apply_differential, coboundary_witness, cocycle_defect, cohomology, differential, Cohomology};
pub use cover::{CoverComplex, Simplex};
pub use presentation::{BundlePresentation, Cochain};
pub use refine::{induced_map, refine, RefinedPresentation, Refinement};

pub mod families {
    pub use super::cover::families::*;
    pub use super::presentation::families::*;
}
