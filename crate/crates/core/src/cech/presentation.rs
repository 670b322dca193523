use std::collections::BTreeMap;

use super::cover::{CoverComplex, Simplex};
use crate::abelian::{Element, FiniteAbelianGroup, GroupHom, IntMatrix};
use crate::error::invalid;
use crate::{Error, Result};

/// A locally constant sheaf of finite abelian groups on a cover: a fiber
/// `H_i` per patch and, on every component `c` of `U_i ∩ U_j` (`i < j`), a
/// gluing isomorphism `θ_{ij,c}: H_j → H_i`.
///
/// Sections over a simplex `σ` take values in the fiber of its least patch,
/// one value per component of `U_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundlePresentation {
    cover: CoverComplex,
    fibers: Vec<FiniteAbelianGroup>,
    gluing: BTreeMap<(Simplex, usize), GroupHom>,
}

/// A cochain: one value per (simplex, component) slot, in slot order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    values: Vec<Element>,
}

impl Cochain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn flat(&self) -> Element {
        self.values.concat()
    }
}

impl BundlePresentation {
    /// Gluing maps for components with `H_i = H_j` may be omitted and default
    /// to the identity.
    pub fn new(
        cover: CoverComplex,
        fibers: Vec<FiniteAbelianGroup>,
        gluing: impl IntoIterator<Item = (Simplex, usize, GroupHom)>,
    ) -> Result<Self> {
        if fibers.len() != cover.patches() {
            return invalid(format!("{} fibers given for {} patches", fibers.len(), cover.patches()));
        }
        let mut given: BTreeMap<(Simplex, usize), GroupHom> = BTreeMap::new();
        for (s, c, h) in gluing {
            if s.dim() != 1 || c >= cover.component_count(&s) {
                return invalid(format!("gluing given for {s} component {c}, which is not an overlap component"));
            }
            if given.insert((s.clone(), c), h).is_some() {
                return invalid(format!("gluing for {s} component {c} given twice"));
            }
        }
        let mut glue = BTreeMap::new();
        for s in cover.simplices(1) {
            let (i, j) = (s.vertices()[0], s.vertices()[1]);
            for c in 0..cover.component_count(&s) {
                let h = match given.remove(&(s.clone(), c)) {
                    Some(h) => h,
                    None if fibers[i] == fibers[j] => GroupHom::identity(&fibers[i]),
                    None => return invalid(format!("missing gluing for {s} component {c}")),
                };
                if h.domain() != &fibers[j] || h.codomain() != &fibers[i] {
                    return invalid(format!("gluing on {s} component {c} must map H_{j} to H_{i}"));
                }
                if !h.is_isomorphism()? {
                    return invalid(format!("gluing on {s} component {c} is not an isomorphism"));
                }
                glue.insert((s.clone(), c), h);
            }
        }
        let p = BundlePresentation { cover, fibers, gluing: glue };
        p.check_compatibility()?;
        Ok(p)
    }

    /// The bundle with fiber `g` and identity gluing everywhere.
    pub fn constant(cover: CoverComplex, g: &FiniteAbelianGroup) -> Self {
        let n = cover.patches();
        Self::new(cover, vec![g.clone(); n], []).expect("constant presentation")
    }

    fn check_compatibility(&self) -> Result<()> {
        for s in self.cover.simplices(2) {
            let v = s.vertices();
            let (j, k) = (v[1], v[2]);
            for c in 0..self.cover.component_count(&s) {
                let ij = self.transport(&s, c, &Simplex::vertex(j))?;
                let jk = self.gluing(&Simplex::edge(j, k), self.cover.face(&s, &Simplex::edge(j, k), c)?)?;
                let ik = self.transport(&s, c, &Simplex::vertex(k))?;
                if ij.compose(jk)? != ik {
                    return invalid(format!("gluing maps are incompatible on {s} component {c}"));
                }
            }
        }
        Ok(())
    }

    pub fn cover(&self) -> &CoverComplex {
        &self.cover
    }

    pub fn fibers(&self) -> &[FiniteAbelianGroup] {
        &self.fibers
    }

    pub fn fiber(&self, i: usize) -> &FiniteAbelianGroup {
        &self.fibers[i]
    }

    /// `θ_{ij,c}: H_j → H_i` for the edge `(i, j)`.
    pub fn gluing(&self, edge: &Simplex, c: usize) -> Result<&GroupHom> {
        self.gluing.get(&(edge.clone(), c)).ok_or_else(|| Error::InvalidInput(format!("{edge} has no component {c}")))
    }

    /// The identification `H_{min τ} → H_{min σ}` valid on component `c` of
    /// `U_σ`, for a face `τ ⊆ σ`.
    pub fn transport(&self, s: &Simplex, c: usize, t: &Simplex) -> Result<GroupHom> {
        let (a, b) = (s.least(), t.least());
        if a == b {
            return Ok(GroupHom::identity(&self.fibers[a]));
        }
        let edge = Simplex::edge(a, b);
        let ec = self.cover.face(s, &edge, c)?;
        self.gluing(&edge, ec).cloned()
    }

    /// `Γ(U_σ)`: one copy of `H_{min σ}` per component.
    pub fn sections(&self, s: &Simplex) -> FiniteAbelianGroup {
        let n = self.cover.component_count(s);
        FiniteAbelianGroup::product(&vec![self.fibers[s.least()].clone(); n])
    }

    /// Restriction `Γ(U_τ) → Γ(U_σ)` for a face `τ ⊆ σ`.
    pub fn restriction(&self, s: &Simplex, t: &Simplex) -> Result<GroupHom> {
        self.cover.require(s)?;
        self.cover.require(t)?;
        if !t.is_face_of(s) {
            return invalid(format!("{t} is not a face of {s}"));
        }
        let src = self.sections(t);
        let tgt = self.sections(s);
        let (ra, rb) = (self.fibers[s.least()].rank(), self.fibers[t.least()].rank());
        let mut m = IntMatrix::zeros(tgt.rank(), src.rank());
        for c in 0..self.cover.component_count(s) {
            let tc = self.cover.face(s, t, c)?;
            let h = self.transport(s, c, t)?;
            for r in 0..ra {
                for q in 0..rb {
                    m.set(c * ra + r, tc * rb + q, h.matrix().get(r, q));
                }
            }
        }
        GroupHom::new(src, tgt, m)
    }

    /// `(simplex, component)` slots of degree-`n` cochains, in order.
    pub fn slots(&self, degree: usize) -> Vec<(Simplex, usize)> {
        self.cover
            .simplices(degree)
            .into_iter()
            .flat_map(|s| {
                let n = self.cover.component_count(&s);
                (0..n).map(move |c| (s.clone(), c))
            })
            .collect()
    }

    /// `C^n = Π_σ Γ(U_σ)`.
    pub fn cochain_group(&self, degree: usize) -> FiniteAbelianGroup {
        let parts: Vec<FiniteAbelianGroup> = self.cover.simplices(degree).iter().map(|s| self.sections(s)).collect();
        FiniteAbelianGroup::product(&parts)
    }

    pub fn cochain(&self, degree: usize, values: Vec<Element>) -> Result<Cochain> {
        let slots = self.slots(degree);
        if values.len() != slots.len() {
            return invalid(format!("degree-{degree} cochain needs {} values, got {}", slots.len(), values.len()));
        }
        let values: Result<Vec<Element>> = slots.iter().zip(&values).map(|((s, _), v)| self.fibers[s.least()].reduce(v)).collect();
        Ok(Cochain { degree, values: values? })
    }

    pub fn zero_cochain(&self, degree: usize) -> Cochain {
        let values = self.slots(degree).iter().map(|(s, _)| self.fibers[s.least()].zero()).collect();
        Cochain { degree, values }
    }

    pub fn cochain_from_flat(&self, degree: usize, flat: &[i64]) -> Result<Cochain> {
        self.cochain_group(degree).check(flat)?;
        let mut values = Vec::new();
        let mut at = 0;
        for (s, _) in self.slots(degree) {
            let r = self.fibers[s.least()].rank();
            values.push(flat[at..at + r].to_vec());
            at += r;
        }
        Ok(Cochain { degree, values })
    }

    pub fn value<'a>(&self, cochain: &'a Cochain, s: &Simplex, c: usize) -> Result<&'a Element> {
        let idx = self
            .slots(cochain.degree)
            .iter()
            .position(|(t, d)| t == s && *d == c)
            .ok_or_else(|| Error::InvalidInput(format!("{s} component {c} is not a cochain slot")))?;
        Ok(&cochain.values[idx])
    }

    /// Degree-one cochain from values on ordered pairs `(i, j, c)`. Pairs with
    /// `i > j` are read as `-value` on `(j, i)`, pairs with `i = j` must be
    /// zero, and each unordered slot must be covered.
    pub fn normalize_oriented(&self, entries: &[(usize, usize, usize, Element)]) -> Result<Cochain> {
        let mut found: BTreeMap<(Simplex, usize), Element> = BTreeMap::new();
        for (i, j, c, v) in entries {
            let (i, j, c) = (*i, *j, *c);
            if i.max(j) >= self.cover.patches() {
                return invalid(format!("pair ({i},{j}) uses a patch index out of range"));
            }
            let g = &self.fibers[i.min(j)];
            let v = g.reduce(v)?;
            if i == j {
                if c >= self.cover.component_count(&Simplex::vertex(i)) || v != g.zero() {
                    return invalid(format!("diagonal value on ({i},{i}) must be zero"));
                }
                continue;
            }
            let edge = Simplex::edge(i, j);
            if c >= self.cover.component_count(&edge) {
                return invalid(format!("({i},{j}) has no component {c}"));
            }
            let v = if i < j { v } else { g.neg(&v) };
            if let Some(prev) = found.insert((edge.clone(), c), v.clone()) {
                if prev != v {
                    return invalid(format!("values on ({i},{j}) and ({j},{i}) component {c} are not skew"));
                }
            }
        }
        let mut values = Vec::new();
        for slot in self.slots(1) {
            match found.remove(&slot) {
                Some(v) => values.push(v),
                None => return invalid(format!("no value for {} component {}", slot.0, slot.1)),
            }
        }
        Ok(Cochain { degree: 1, values })
    }

    /// All ordered-pair values of a degree-one cochain, including zero
    /// diagonal entries; inverse to [`normalize_oriented`](Self::normalize_oriented).
    pub fn oriented_values(&self, cochain: &Cochain) -> Result<Vec<(usize, usize, usize, Element)>> {
        if cochain.degree != 1 {
            return invalid("oriented values are defined for degree-one cochains");
        }
        let mut out = Vec::new();
        for i in 0..self.cover.patches() {
            for c in 0..self.cover.component_count(&Simplex::vertex(i)) {
                out.push((i, i, c, self.fibers[i].zero()));
            }
        }
        for ((s, c), v) in self.slots(1).into_iter().zip(&cochain.values) {
            let (i, j) = (s.vertices()[0], s.vertices()[1]);
            out.push((i, j, c, v.clone()));
            out.push((j, i, c, self.fibers[i].neg(v)));
        }
        out.sort();
        Ok(out)
    }
}

/// Presentations used by examples and tests.
pub mod families {
    use super::*;
    use crate::cech::cover::families as covers;

    /// The circle with three arcs, fiber `Z/4`, and gluing `-1` on the
    /// overlap of arcs 0 and 1.
    pub fn mobius_z4() -> BundlePresentation {
        let z4 = FiniteAbelianGroup::cyclic(4);
        let flip = GroupHom::scalar(&z4, -1).expect("negation on Z/4");
        BundlePresentation::new(covers::circle(3), vec![z4; 3], [(Simplex::edge(0, 1), 0, flip)]).expect("twisted circle")
    }
}
