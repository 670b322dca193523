//! Locally unitary actions: transition characters, the spectrum as a
//! principal bundle over the dual group bundle, exterior equivalences versus
//! bundle isomorphisms, and the dual-action construction that realizes a
//! given bundle.

mod datum;
mod dual;
mod spectrum;
mod takai;
mod unique;

pub use datum::{extract_transition_class, transition_character, LocallyUnitaryDatum};
pub use dual::DualBundlePresentation;
pub use spectrum::{spectrum_bundle, SpectrumBundle};
pub use takai::{takai_pipeline, DualSign, FibreStage, TakaiReport};
pub use unique::{equivalence_to_iso, iso_to_equivalence, ExteriorEquivalence};
