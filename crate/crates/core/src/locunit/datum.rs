use std::collections::BTreeMap;

use super::dual::DualBundlePresentation;
use crate::abelian::{Character, Element, FiniteAbelianGroup, Phase};
use crate::bundles::{PointedCover, PrincipalBundle};
use crate::cech::{cocycle_defect, BundlePresentation};
use crate::cstar::{scalar_part, ActionDatum, CMat, FiberAlgebra, UnitaryActionDatum, C64};
use crate::error::invalid;
use crate::{Error, Result};

/// An action of a group bundle on matrix fibers over a pointed cover,
/// together with a unitary lift on every patch: `lifts[(i, u)]` implements
/// the action at every point `u` of patch `i`. Group elements are taken in
/// the coordinates of the home patch of each point.
#[derive(Clone, Debug)]
pub struct LocallyUnitaryDatum {
    dual: DualBundlePresentation,
    pointed: PointedCover,
    actions: Vec<ActionDatum>,
    lifts: BTreeMap<(usize, usize), UnitaryActionDatum>,
}

impl LocallyUnitaryDatum {
    pub fn new(
        presentation: BundlePresentation,
        pointed: PointedCover,
        actions: Vec<ActionDatum>,
        lifts: impl IntoIterator<Item = ((usize, usize), UnitaryActionDatum)>,
        tol: f64,
    ) -> Result<Self> {
        pointed.check_presentation(&presentation)?;
        if actions.len() != pointed.len() {
            return invalid(format!("{} actions given for {} points", actions.len(), pointed.len()));
        }
        for (u, a) in actions.iter().enumerate() {
            if a.group() != pointed.fiber(&presentation, u) {
                return invalid(format!("action at point {u} is not by the fiber group {}", pointed.fiber(&presentation, u)));
            }
            if !matches!(a.fiber(), FiberAlgebra::Matrix(_)) {
                return invalid(format!("action at point {u} must be on a matrix fiber"));
            }
        }
        let mut map = BTreeMap::new();
        for ((i, u), lift) in lifts {
            if u >= pointed.len() || !pointed.contains(i, u) {
                return invalid(format!("lift given for patch {i} at point {u}, which it does not contain"));
            }
            if !lift.implements(&actions[u], tol)? {
                return invalid(format!("lift on patch {i} does not implement the action at point {u}"));
            }
            if map.insert((i, u), lift).is_some() {
                return invalid(format!("two lifts given for patch {i} at point {u}"));
            }
        }
        for u in 0..pointed.len() {
            for &i in pointed.patches_of(u) {
                if !map.contains_key(&(i, u)) {
                    return invalid(format!("missing lift for patch {i} at point {u}"));
                }
            }
        }
        let dual = DualBundlePresentation::new(&presentation)?;
        Ok(LocallyUnitaryDatum { dual, pointed, actions, lifts: map })
    }

    pub fn presentation(&self) -> &BundlePresentation {
        self.dual.primal()
    }

    pub fn dual(&self) -> &DualBundlePresentation {
        &self.dual
    }

    pub fn pointed(&self) -> &PointedCover {
        &self.pointed
    }

    pub fn fiber(&self, u: usize) -> &FiniteAbelianGroup {
        self.pointed.fiber(self.presentation(), u)
    }

    pub fn action(&self, u: usize) -> &ActionDatum {
        &self.actions[u]
    }

    pub fn actions(&self) -> &[ActionDatum] {
        &self.actions
    }

    pub fn lift(&self, i: usize, u: usize) -> &UnitaryActionDatum {
        &self.lifts[&(i, u)]
    }
}

/// Matches `s ↦ values[s]` (group element order) to an exact character;
/// `None` unless every value is a root of unity and the map is
/// multiplicative.
pub(crate) fn snap_character(g: &FiniteAbelianGroup, values: &[C64], tol: f64) -> Result<Option<Character>> {
    let e = g.exponent();
    let mut phases = Vec::with_capacity(values.len());
    for z in values {
        match Phase::snap(*z, e, tol.max(1e-7)) {
            Some(p) => phases.push(p),
            None => return Ok(None),
        }
    }
    let mut comps = Vec::with_capacity(g.rank());
    for (k, &m) in g.moduli().iter().enumerate() {
        let p = phases[g.index_of(&g.generator(k))];
        if (p.num() * m) % p.den() != 0 {
            return Ok(None);
        }
        comps.push(p.num() * m / p.den());
    }
    let chi = Character::new(g, &comps)?;
    for (s, p) in g.elements().zip(&phases) {
        if chi.pairing(&s)? != *p {
            return Ok(None);
        }
    }
    Ok(Some(chi))
}

/// The scalar `λ` with `m = λ·1`, as an error when `m` is not scalar.
pub(crate) fn scalar_of(m: &CMat, tol: f64, what: impl FnOnce() -> String) -> Result<C64> {
    scalar_part(m, tol.max(1e-7)).ok_or_else(|| Error::NotLocallyUnitary(format!("{} is not a scalar", what())))
}

/// The character `s ↦ scalar((u^i_s)* u^j_s)` of `S_u`.
pub fn transition_character(d: &LocallyUnitaryDatum, i: usize, j: usize, u: usize, tol: f64) -> Result<Character> {
    let g = d.fiber(u);
    let (ui, uj) = (d.lift(i, u), d.lift(j, u));
    let values = g
        .elements()
        .map(|s| scalar_of(&(ui.unitary(&s).adjoint() * uj.unitary(&s)), tol, || format!("(u^{i}_s)* u^{j}_s at point {u}, s = {s:?},")))
        .collect::<Result<Vec<_>>>()?;
    snap_character(g, &values, tol)?
        .ok_or_else(|| Error::NotLocallyUnitary(format!("transition scalars between patches {i} and {j} at point {u} are not a character")))
}

/// The transition cocycle of a locally unitary datum, a bundle over the dual
/// presentation, with its class in `Ȟ¹(Ŝ)`.
pub fn extract_transition_class(d: &LocallyUnitaryDatum, tol: f64) -> Result<PrincipalBundle> {
    let dual = d.dual.presentation();
    let mut values = Vec::new();
    for (e, c) in dual.slots(1) {
        let (i, j) = (e.vertices()[0], e.vertices()[1]);
        let mut value: Option<(usize, Element)> = None;
        for u in d.pointed.points_in(&e, c) {
            let chi = transition_character(d, i, j, u, tol)?;
            let w = d.dual.to_chart(&d.pointed, i, u, &chi)?;
            match &value {
                None => value = Some((u, w)),
                Some((_, v)) if *v == w => {}
                Some((u0, v)) => {
                    return Err(Error::DiscontinuousSection(format!(
                        "transition character on {e} component {c} is {v:?} at point {u0} and {w:?} at point {u}"
                    )))
                }
            }
        }
        match value {
            Some((_, v)) => values.push(v),
            None => return invalid(format!("no sample point lies in {e} component {c}")),
        }
    }
    let cocycle = dual.cochain(1, values)?;
    if let Some((s, c)) = cocycle_defect(dual, &cocycle)? {
        return Err(Error::InternalInconsistency(format!("transition characters violate the cocycle identity on {s} component {c}")));
    }
    PrincipalBundle::new(dual.clone(), cocycle)
}
