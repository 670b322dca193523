//! Principal bundles with finite abelian fibers: as Čech cocycles, and as
//! explicitly glued spaces over a finite sample of base points.

mod glued;
mod iso;
mod pointed;
mod sigma;

pub(crate) use glued::transition_at;
pub use glued::{check_principal_axioms, glue_total_space, trivialization_from_sections, GluedSpace, PrincipalAxioms};
pub use iso::{equivariant_map_implies_iso, iso_bundles, iso_bundles_refined, verify_witness, EquivariantOutcome, IsoOutcome};
pub use pointed::PointedCover;
pub use sigma::{SigmaCharts, SigmaTrivialBundle, SigmaTrivialSystem};

use crate::abelian::Element;
use crate::cech::{cocycle_defect, cohomology, BundlePresentation, Cochain};
use crate::error::invalid;
use crate::Result;

/// A bundle given by a 1-cocycle on a presentation, with its class in `Ȟ¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalBundle {
    presentation: BundlePresentation,
    cocycle: Cochain,
    class: Element,
}

impl PrincipalBundle {
    pub fn new(presentation: BundlePresentation, cocycle: Cochain) -> Result<Self> {
        if cocycle.degree() != 1 {
            return invalid("transition data must be a degree-one cochain");
        }
        let cocycle = presentation.cochain(1, cocycle.values().to_vec())?;
        if let Some((s, c)) = cocycle_defect(&presentation, &cocycle)? {
            return invalid(format!("transition data fails the cocycle condition on {s} component {c}"));
        }
        let class = cohomology(&presentation, 1)?.class_of(&cocycle.flat())?;
        Ok(PrincipalBundle { presentation, cocycle, class })
    }

    pub fn trivial(presentation: BundlePresentation) -> Self {
        let c = presentation.zero_cochain(1);
        Self::new(presentation, c).expect("zero cochain is a cocycle")
    }

    pub fn presentation(&self) -> &BundlePresentation {
        &self.presentation
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    /// Coordinates of the class in `Ȟ¹`.
    pub fn class(&self) -> &[i64] {
        &self.class
    }
}
