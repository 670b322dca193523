use super::glued::GluedSpace;
use super::PrincipalBundle;
use crate::abelian::Element;
use crate::cech::{apply_differential, coboundary_witness, BundlePresentation, Cochain, Refinement};
use crate::error::invalid;
use crate::{Error, Result};

/// Result of comparing two bundles on the same presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `η_ij = β_i + γ_ij − β_j`
    Isomorphic { witness: Cochain },
    /// the two `Ȟ¹` coordinates
    Distinct { left: Element, right: Element },
}

/// Decides whether the bundles with cocycles `γ` (left) and `η` (right) are
/// isomorphic, returning the least `β` with `η − γ = dβ`.
pub fn iso_bundles(left: &PrincipalBundle, right: &PrincipalBundle) -> Result<IsoOutcome> {
    if left.presentation() != right.presentation() {
        return invalid("bundles are presented on different sheaves; refine them to a common cover first");
    }
    let p = left.presentation();
    let diff = p.cochain_group(1).sub(&right.cocycle().flat(), &left.cocycle().flat());
    let diff = p.cochain_from_flat(1, &diff)?;
    match coboundary_witness(p, &diff)? {
        Some(witness) => Ok(IsoOutcome::Isomorphic { witness }),
        None => Ok(IsoOutcome::Distinct { left: left.class().to_vec(), right: right.class().to_vec() }),
    }
}

/// Pulls both bundles back along the given refinements and compares them
/// there.
pub fn iso_bundles_refined(
    left: &PrincipalBundle,
    left_ref: &Refinement,
    right: &PrincipalBundle,
    right_ref: &Refinement,
) -> Result<IsoOutcome> {
    let l = left.refine(left_ref)?;
    let r = right.refine(right_ref)?;
    if l.presentation() != r.presentation() {
        return invalid("refinements do not produce a common presentation");
    }
    iso_bundles(&l, &r)
}

/// Checks that `β` carries the left cocycle to the right one.
pub fn verify_witness(left: &PrincipalBundle, right: &PrincipalBundle, beta: &Cochain) -> Result<bool> {
    let p = left.presentation();
    if beta.degree() != 0 || p != right.presentation() {
        return invalid("witness must be a 0-cochain on the common presentation");
    }
    let db = apply_differential(p, beta)?;
    let g = p.cochain_group(1);
    Ok(g.add(&left.cocycle().flat(), &db.flat()) == right.cocycle().flat())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivariantOutcome {
    Isomorphism { witness: Cochain },
    Rejected(String),
}

/// Reads off the 0-cochain `β_i(u) = φ'_i(Ω(φ_i⁻¹(0)))` of a base-preserving
/// map `Ω` between glued spaces and checks that it is an isomorphism.
pub fn equivariant_map_implies_iso(
    left: &GluedSpace,
    right: &GluedSpace,
    omega: &[usize],
    bundles: (&PrincipalBundle, &PrincipalBundle),
) -> Result<EquivariantOutcome> {
    if left.presentation() != right.presentation() || left.pointed_cover() != right.pointed_cover() {
        return invalid("glued spaces live over different pointed covers");
    }
    if omega.len() != left.len() {
        return invalid(format!("map has {} entries for {} points", omega.len(), left.len()));
    }
    for (x, &y) in omega.iter().enumerate() {
        if y >= right.len() || right.base(y) != left.base(x) {
            return invalid(format!("map sends point {x} off its base point"));
        }
    }
    for x in 0..left.len() {
        for s in left.fiber(left.base(x)).elements() {
            if omega[left.act(&s, x)?] != right.act(&s, omega[x])? {
                return Ok(EquivariantOutcome::Rejected(format!("map is not equivariant at point {x}, element {s:?}")));
            }
        }
    }
    let p = left.presentation();
    let pc = left.pointed_cover();
    let mut values = Vec::new();
    for (v, c) in p.slots(0) {
        let i = v.least();
        let mut value: Option<Element> = None;
        for u in pc.points_in(&v, c) {
            let fiber = left.fiber(u);
            let s = right.phi(i, omega[left.phi_inv(i, u, &fiber.zero())?])?;
            let local = pc.chart_to_fiber(p, i, u)?.inverse()?.apply(&s)?;
            match &value {
                None => value = Some(local),
                Some(b) if *b == local => {}
                Some(b) => {
                    return Ok(EquivariantOutcome::Rejected(format!(
                        "map is not continuous: it shifts patch {i} component {c} by both {b:?} and {local:?}"
                    )))
                }
            }
        }
        values.push(value.unwrap_or_else(|| p.fiber(i).zero()));
    }
    let beta = p.cochain(0, values)?;
    if !verify_witness(bundles.0, bundles.1, &beta)? {
        return Err(Error::InternalInconsistency("extracted shift does not intertwine the cocycles".into()));
    }
    Ok(EquivariantOutcome::Isomorphism { witness: beta })
}

impl PrincipalBundle {
    /// The pull-back along a refinement.
    pub fn refine(&self, r: &Refinement) -> Result<PrincipalBundle> {
        let rp = crate::cech::refine(self.presentation(), r)?;
        let fine: &BundlePresentation = &rp.presentation;
        let c = fine.cochain_from_flat(1, &rp.cochain_maps[1].apply(&self.cocycle().flat())?)?;
        PrincipalBundle::new(fine.clone(), c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;
    use crate::bundles::{glue_total_space, PointedCover};
    use crate::cech::families::circle;

    fn circle_bundle(m: i64, g: &[i64]) -> PrincipalBundle {
        let p = BundlePresentation::constant(circle(3), &FiniteAbelianGroup::cyclic(m));
        let c = p.cochain(1, g.iter().map(|&x| vec![x]).collect()).unwrap();
        PrincipalBundle::new(p, c).unwrap()
    }

    #[test]
    fn iso_examples() {
        // slots (0,1), (0,2), (1,2): the oriented triple (1,1,0) on
        // (0,1), (1,2), (0,2) is [1, 0, 1] here
        let a = circle_bundle(2, &[1, 0, 1]);
        let o = circle_bundle(2, &[0, 0, 0]);
        assert!(matches!(iso_bundles(&a, &a).unwrap(), IsoOutcome::Isomorphic { witness } if witness.flat() == vec![0, 0, 0]));
        match iso_bundles(&a, &o).unwrap() {
            IsoOutcome::Isomorphic { witness } => assert!(verify_witness(&a, &o, &witness).unwrap()),
            other => panic!("{other:?}"),
        }
        let b = circle_bundle(2, &[1, 0, 0]);
        assert_eq!(iso_bundles(&b, &o).unwrap(), IsoOutcome::Distinct { left: vec![1], right: vec![0] });
    }

    /// Every equivariant base-preserving map: one free choice per base
    /// point, since fibers are single orbits.
    fn equivariant_maps(l: &GluedSpace, r: &GluedSpace) -> Vec<Vec<usize>> {
        let n = l.pointed_cover().len();
        let mut maps = vec![vec![usize::MAX; l.len()]];
        for u in 0..n {
            let x0 = l.points_over(u)[0];
            let fiber = l.fiber(u).clone();
            maps = maps
                .into_iter()
                .flat_map(|m| {
                    let fiber = fiber.clone();
                    r.points_over(u).into_iter().map(move |y| {
                        let mut m = m.clone();
                        for s in fiber.elements() {
                            m[l.act(&s, x0).unwrap()] = r.act(&s, y).unwrap();
                        }
                        m
                    })
                })
                .collect();
        }
        maps
    }

    #[test]
    fn translation_on_one_point() {
        let z3 = FiniteAbelianGroup::cyclic(3);
        let p = BundlePresentation::constant(crate::cech::families::single_patch(), &z3);
        let pc = PointedCover::new(p.cover().clone(), vec![vec![0]], []).unwrap();
        let b = PrincipalBundle::trivial(p);
        let g = glue_total_space(&pc, &b).unwrap();
        let omega: Vec<usize> = (0..3).map(|x| g.act(&[2], x).unwrap()).collect();
        let out = equivariant_map_implies_iso(&g, &g, &omega, (&b, &b)).unwrap();
        assert!(matches!(out, EquivariantOutcome::Isomorphism { witness } if witness.flat() == vec![2]));
        let swap = vec![0, 2, 1];
        assert!(matches!(equivariant_map_implies_iso(&g, &g, &swap, (&b, &b)).unwrap(), EquivariantOutcome::Rejected(_)));
    }

    /// Exhaustive classification on the 3-arc circle: cocycles fall into
    /// `m` classes, and continuous equivariant maps exist exactly between
    /// bundles in the same class.
    #[test]
    fn classification_by_search() {
        for m in 2..=3 {
            let z = FiniteAbelianGroup::cyclic(m);
            let p = BundlePresentation::constant(circle(3), &z);
            let pc = PointedCover::new(p.cover().clone(), vec![vec![0, 1], vec![0, 2], vec![1, 2]], []).unwrap();
            let bundles: Vec<PrincipalBundle> = p
                .cochain_group(1)
                .elements()
                .map(|c| PrincipalBundle::new(p.clone(), p.cochain_from_flat(1, &c).unwrap()).unwrap())
                .collect();
            let mut classes: Vec<Element> = bundles.iter().map(|b| b.class().to_vec()).collect();
            classes.sort();
            classes.dedup();
            assert_eq!(classes.len() as i64, m);
            let spaces: Vec<GluedSpace> = bundles.iter().map(|b| glue_total_space(&pc, b).unwrap()).collect();
            for a in 0..bundles.len() {
                for b in 0..bundles.len() {
                    let same = matches!(iso_bundles(&bundles[a], &bundles[b]).unwrap(), IsoOutcome::Isomorphic { .. });
                    let maps = equivariant_maps(&spaces[a], &spaces[b]);
                    let found = maps.iter().any(|om| {
                        matches!(
                            equivariant_map_implies_iso(&spaces[a], &spaces[b], om, (&bundles[a], &bundles[b])).unwrap(),
                            EquivariantOutcome::Isomorphism { .. }
                        )
                    });
                    assert_eq!(same, found, "m={m} a={a} b={b}");
                }
            }
        }
    }
}
