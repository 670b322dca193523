//! Finite ("desk scale") models of principal bundles over abelian group
//! bundles and of locally unitary crossed products.
//!
//! * [`abelian`]: exact finite abelian groups, homomorphisms, Smith normal
//!   form, characters.
//! * [`cech`]: component-decorated cover nerves, bundle presentations and
//!   the Čech complex of the sheaf of sections, with `H⁰` and `H¹`.
//! * [`bundles`]: principal bundles as cocycles and as glued spaces with
//!   their fibrewise action, isomorphism witnesses, σ-trivial systems.
//! * [`cstar`]: finite-dimensional *-algebras, group actions, convolution
//!   crossed products and representation enumeration.
//! * [`locunit`]: locally unitary actions, transition characters, the
//!   spectrum bundle, exterior equivalence and the dual-action pipeline.
//!
//! Sections of the group bundle are written additively throughout; the
//! multiplicative `γ_ij(u)s` of the classical notation is `γ_ij(u) + s` here.

pub mod abelian;
pub mod bundles;
pub mod cech;
pub mod cstar;
mod error;
pub mod locunit;

pub use error::{Error, Result};
