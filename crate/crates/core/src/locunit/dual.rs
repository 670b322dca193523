use crate::abelian::{dual_group, dual_hom, Character, Element};
use crate::bundles::PointedCover;
use crate::cech::BundlePresentation;
use crate::Result;

/// The dual sheaf `Ŝ` of a presentation: fibers `Ĥ_i` and gluing
/// `θ̂_{ij,c} = (θ_{ij,c}⁻¹)^`, so that `θ̂ω` pairs with `θs` as `ω` with
/// `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBundlePresentation {
    primal: BundlePresentation,
    dual: BundlePresentation,
}

impl DualBundlePresentation {
    pub fn new(primal: &BundlePresentation) -> Result<Self> {
        let fibers = primal.fibers().iter().map(dual_group).collect();
        let mut gluing = Vec::new();
        for (e, c) in primal.slots(1) {
            gluing.push((e.clone(), c, dual_hom(&primal.gluing(&e, c)?.inverse()?)?));
        }
        let dual = BundlePresentation::new(primal.cover().clone(), fibers, gluing)?;
        Ok(DualBundlePresentation { primal: primal.clone(), dual })
    }

    pub fn primal(&self) -> &BundlePresentation {
        &self.primal
    }

    pub fn presentation(&self) -> &BundlePresentation {
        &self.dual
    }

    /// The character of `S_u` given by coordinates in `Ĥ_i`.
    pub fn to_fiber(&self, pc: &PointedCover, i: usize, u: usize, chart: &[i64]) -> Result<Character> {
        let theta = pc.chart_to_fiber(&self.primal, i, u)?;
        Character::new(self.primal.fiber(i), chart)?.pull_back(&theta.inverse()?)
    }

    /// Coordinates in `Ĥ_i` of a character of `S_u`.
    pub fn to_chart(&self, pc: &PointedCover, i: usize, u: usize, omega: &Character) -> Result<Element> {
        let theta = pc.chart_to_fiber(&self.primal, i, u)?;
        Ok(omega.pull_back(&theta)?.components().to_vec())
    }
}
