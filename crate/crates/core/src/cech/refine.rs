use std::collections::BTreeMap;

use super::complex::{cohomology, differential, Cohomology};
use super::cover::{CoverComplex, Simplex};
use super::presentation::BundlePresentation;
use crate::abelian::{FiniteAbelianGroup, GroupHom, IntMatrix};
use crate::error::invalid;
use crate::{Error, Result};

/// A finer cover together with a patch map `ρ` (each fine patch lies in
/// coarse patch `ρ(a)`) and, for every nonempty fine simplex `σ`, the coarse
/// component of `U_{ρ(σ)}` containing each component of `V_σ`.
#[derive(Clone, Debug)]
pub struct Refinement {
    fine: CoverComplex,
    patch_map: Vec<usize>,
    lifts: BTreeMap<Simplex, Vec<usize>>,
}

impl Refinement {
    /// Lifts may be omitted where the coarse image has a single component.
    pub fn new(fine: CoverComplex, patch_map: Vec<usize>, lifts: impl IntoIterator<Item = (Simplex, Vec<usize>)>) -> Result<Self> {
        if patch_map.len() != fine.patches() {
            return invalid(format!("patch map has {} entries for {} patches", patch_map.len(), fine.patches()));
        }
        Ok(Refinement { fine, patch_map, lifts: lifts.into_iter().collect() })
    }

    pub fn fine(&self) -> &CoverComplex {
        &self.fine
    }

    pub fn patch_map(&self) -> &[usize] {
        &self.patch_map
    }

    fn image(&self, s: &Simplex) -> Result<Simplex> {
        let mut v: Vec<usize> = s.vertices().iter().map(|&a| self.patch_map[a]).collect();
        v.sort_unstable();
        v.dedup();
        Simplex::new(v)
    }

    fn resolved_lifts(&self, coarse: &CoverComplex) -> Result<BTreeMap<Simplex, Vec<usize>>> {
        if let Some(&b) = self.patch_map.iter().find(|&&b| b >= coarse.patches()) {
            return invalid(format!("patch map sends a patch to {b}, outside the coarse cover"));
        }
        let mut out = BTreeMap::new();
        for dim in 0..3 {
            for s in self.fine.simplices(dim) {
                let img = self.image(&s)?;
                let m = coarse.component_count(&img);
                if m == 0 {
                    return invalid(format!("fine simplex {s} maps to {img}, which is empty in the coarse cover"));
                }
                let n = self.fine.component_count(&s);
                let lift = match self.lifts.get(&s) {
                    Some(l) => l.clone(),
                    None if m == 1 => vec![0; n],
                    None => return invalid(format!("missing component lift for fine simplex {s}")),
                };
                if lift.len() != n || lift.iter().any(|&c| c >= m) {
                    return invalid(format!("component lift of {s} must send {n} components into {m}"));
                }
                out.insert(s, lift);
            }
        }
        for (s, lift) in &out {
            let img = self.image(s)?;
            for t in s.facets() {
                let timg = self.image(&t)?;
                for (c, &l) in lift.iter().enumerate() {
                    let via_fine = out[&t][self.fine.face(s, &t, c)?];
                    let via_coarse = coarse.face(&img, &timg, l)?;
                    if via_fine != via_coarse {
                        return invalid(format!("component lifts of {s} and its face {t} disagree"));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The pull-back of a presentation to a refinement, with its cochain maps.
#[derive(Clone, Debug)]
pub struct RefinedPresentation {
    pub presentation: BundlePresentation,
    /// `C^n(coarse) → C^n(fine)` for `n = 0, 1, 2`
    pub cochain_maps: Vec<GroupHom>,
    /// the induced map on `Ȟ¹`
    pub h1_map: GroupHom,
}

pub fn refine(p: &BundlePresentation, r: &Refinement) -> Result<RefinedPresentation> {
    let lifts = r.resolved_lifts(p.cover())?;
    let fibers: Vec<FiniteAbelianGroup> = r.patch_map.iter().map(|&b| p.fiber(b).clone()).collect();
    let mut glue = Vec::new();
    for s in r.fine.simplices(1) {
        let (a, b) = (r.patch_map[s.vertices()[0]], r.patch_map[s.vertices()[1]]);
        for (c, &l) in lifts[&s].iter().enumerate() {
            let h = if a == b {
                GroupHom::identity(p.fiber(a))
            } else if a < b {
                p.gluing(&Simplex::edge(a, b), l)?.clone()
            } else {
                p.gluing(&Simplex::edge(b, a), l)?.inverse()?
            };
            glue.push((s.clone(), c, h));
        }
    }
    let fine = BundlePresentation::new(r.fine.clone(), fibers, glue)?;
    let maps: Vec<GroupHom> = (0..3).map(|n| cochain_map(p, &fine, r, &lifts, n)).collect::<Result<_>>()?;
    for n in 0..2 {
        let lhs = differential(&fine, n)?.compose(&maps[n])?;
        let rhs = maps[n + 1].compose(&differential(p, n)?)?;
        if lhs != rhs {
            return Err(Error::InternalInconsistency(format!("refinement map does not commute with d in degree {n}")));
        }
    }
    let h1_map = induced_map(&cohomology(p, 1)?, &cohomology(&fine, 1)?, &maps[1])?;
    Ok(RefinedPresentation { presentation: fine, cochain_maps: maps, h1_map })
}

fn cochain_map(
    coarse: &BundlePresentation,
    fine: &BundlePresentation,
    r: &Refinement,
    lifts: &BTreeMap<Simplex, Vec<usize>>,
    n: usize,
) -> Result<GroupHom> {
    let src = coarse.cochain_group(n);
    let tgt = fine.cochain_group(n);
    let mut offset = BTreeMap::new();
    let mut at = 0;
    for (s, c) in coarse.slots(n) {
        let w = coarse.fiber(s.least()).rank();
        offset.insert((s, c), at);
        at += w;
    }
    let mut m = IntMatrix::zeros(tgt.rank(), src.rank());
    let mut row = 0;
    for (s, c) in fine.slots(n) {
        let images: Vec<usize> = s.vertices().iter().map(|&a| r.patch_map[a]).collect();
        let w = fine.fiber(s.least()).rank();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == images.len() {
            let inversions =
                (0..images.len()).flat_map(|i| (i + 1..images.len()).map(move |j| (i, j))).filter(|&(i, j)| images[i] > images[j]);
            let sign = if inversions.count() % 2 == 0 { 1 } else { -1 };
            let img = Simplex::new(sorted)?;
            let l = lifts[&s][c];
            // the coarse value lives in H_{min img}; move it to H_{ρ(min s)}
            let to_fine = coarse.transport(&img, l, &Simplex::vertex(images[0]))?.inverse()?;
            let c0 = offset[&(img, l)];
            for a in 0..w {
                for b in 0..to_fine.domain().rank() {
                    m.set(row + a, c0 + b, sign * to_fine.matrix().get(a, b));
                }
            }
        }
        row += w;
    }
    GroupHom::new(src, tgt, m)
}

/// The map `Ȟ^n(A) → Ȟ^n(B)` induced by a cochain map in degree `n`.
pub fn induced_map(a: &Cohomology, b: &Cohomology, f: &GroupHom) -> Result<GroupHom> {
    let mut cols = Vec::new();
    for k in 0..a.group().rank() {
        let rep = a.representative(&a.group().generator(k))?;
        cols.push(b.class_of(&f.apply(&rep)?)?);
    }
    GroupHom::new(a.group().clone(), b.group().clone(), IntMatrix::from_columns(&cols, b.group().rank())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::cover::families::{circle, single_patch};
    use crate::cech::presentation::families::mobius_z4;

    /// Six arcs over three, arcs 2k and 2k+1 inside coarse arc k.
    fn six_over_three() -> Refinement {
        Refinement::new(circle(6), vec![0, 0, 1, 1, 2, 2], []).unwrap()
    }

    #[test]
    fn subdivision_is_iso_on_h1() {
        let z2 = FiniteAbelianGroup::cyclic(2);
        for p in [BundlePresentation::constant(circle(3), &z2), mobius_z4()] {
            let rp = refine(&p, &six_over_three()).unwrap();
            assert!(rp.h1_map.is_isomorphism().unwrap());
        }
    }

    #[test]
    fn two_arcs_to_three() {
        // coarse: two arcs meeting in components 0 and 1; fine: three arcs,
        // arcs 0,1 inside coarse arc 0 and arc 2 inside coarse arc 1
        let z3 = FiniteAbelianGroup::cyclic(3);
        let p = BundlePresentation::constant(circle(2), &z3);
        let r = Refinement::new(circle(3), vec![0, 0, 1], [(Simplex::edge(1, 2), vec![0]), (Simplex::edge(0, 2), vec![1])]).unwrap();
        let rp = refine(&p, &r).unwrap();
        assert!(rp.h1_map.is_isomorphism().unwrap());
    }

    #[test]
    fn inconsistent_lift_rejected() {
        let z3 = FiniteAbelianGroup::cyclic(3);
        let p = BundlePresentation::constant(circle(2), &z3);
        let r = Refinement::new(circle(3), vec![0, 0, 1], []).unwrap();
        assert!(refine(&p, &r).is_err());
    }

    #[test]
    fn collapse_to_single_patch_kills_h1() {
        let z2 = FiniteAbelianGroup::cyclic(2);
        let p = BundlePresentation::constant(single_patch(), &z2);
        let r = Refinement::new(circle(3), vec![0, 0, 0], []).unwrap();
        let rp = refine(&p, &r).unwrap();
        assert!(rp.h1_map.is_zero());
    }
}
