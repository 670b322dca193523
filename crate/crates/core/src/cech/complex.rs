use super::cover::Simplex;
use super::presentation::{BundlePresentation, Cochain};
use crate::abelian::{quotient, Element, FiniteAbelianGroup, GroupHom, IntMatrix};
use crate::error::invalid;
use crate::{Error, Result};

/// The coboundary `C^n → C^{n+1}` for `n ∈ {0, 1}`:
/// `(dβ)_{ij} = β_i − β_j` and `(dγ)_{ijk} = γ_{jk} − γ_{ik} + γ_{ij}`, each
/// term restricted to the component and expressed in the least fiber.
pub fn differential(p: &BundlePresentation, degree: usize) -> Result<GroupHom> {
    if degree > 1 {
        return invalid(format!("no differential out of degree {degree}"));
    }
    let src_simplices = p.cover().simplices(degree);
    let tgt_simplices = p.cover().simplices(degree + 1);
    let src = p.cochain_group(degree);
    let tgt = p.cochain_group(degree + 1);
    let mut col_offset = std::collections::BTreeMap::new();
    let mut at = 0;
    for s in &src_simplices {
        col_offset.insert(s.clone(), at);
        at += p.sections(s).rank();
    }
    let mut m = IntMatrix::zeros(tgt.rank(), src.rank());
    let mut row = 0;
    for s in &tgt_simplices {
        let rows = p.sections(s).rank();
        for (d, f) in s.facets().into_iter().enumerate() {
            // the degree-0 map carries the opposite of the alternating sign
            let sign = if (d + degree).is_multiple_of(2) { -1 } else { 1 };
            let r = p.restriction(s, &f)?;
            let c0 = col_offset[&f];
            for a in 0..rows {
                for b in 0..r.domain().rank() {
                    let v = m.get(row + a, c0 + b) + sign * r.matrix().get(a, b);
                    m.set(row + a, c0 + b, v);
                }
            }
        }
        row += rows;
    }
    GroupHom::new(src, tgt, m)
}

pub fn apply_differential(p: &BundlePresentation, c: &Cochain) -> Result<Cochain> {
    let d = differential(p, c.degree())?;
    p.cochain_from_flat(c.degree() + 1, &d.apply(&c.flat())?)
}

/// `Ȟ^n` of a presentation together with the maps needed to move between
/// classes and cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degree: usize,
    group: FiniteAbelianGroup,
    cocycles: FiniteAbelianGroup,
    inclusion: GroupHom,
    projection: GroupHom,
}

impl Cohomology {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The cohomology group, in invariant-factor form.
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn cocycles(&self) -> &FiniteAbelianGroup {
        &self.cocycles
    }

    /// `Z^n → C^n`.
    pub fn inclusion(&self) -> &GroupHom {
        &self.inclusion
    }

    /// `Z^n → Ȟ^n`.
    pub fn projection(&self) -> &GroupHom {
        &self.projection
    }

    /// Coordinates of the class of a cocycle, given as a flat cochain.
    pub fn class_of(&self, flat: &[i64]) -> Result<Element> {
        let z = self.inclusion.solve(flat)?.ok_or_else(|| Error::InvalidInput("cochain is not a cocycle".into()))?;
        self.projection.apply(&z)
    }

    /// A canonical cocycle in the class with the given coordinates.
    pub fn representative(&self, class: &[i64]) -> Result<Element> {
        let z =
            self.projection.solve(class)?.ok_or_else(|| Error::InternalInconsistency("cohomology projection is not surjective".into()))?;
        self.inclusion.apply(&z)
    }
}

pub fn cohomology(p: &BundlePresentation, degree: usize) -> Result<Cohomology> {
    let d = differential(p, degree)?;
    let (cocycles, inclusion) = d.kernel()?;
    let mut gens = Vec::new();
    if degree == 1 {
        let d0 = differential(p, 0)?;
        for j in 0..d0.domain().rank() {
            let b = d0.apply(&d0.domain().generator(j))?;
            let z = inclusion.solve(&b)?.ok_or_else(|| Error::InternalInconsistency("a coboundary is not a cocycle".into()))?;
            gens.push(z);
        }
    }
    let (group, projection) = quotient(&cocycles, &gens)?;
    Ok(Cohomology { degree, group, cocycles, inclusion, projection })
}

/// The first triple on which `γ` fails the cocycle condition.
pub fn cocycle_defect(p: &BundlePresentation, gamma: &Cochain) -> Result<Option<(Simplex, usize)>> {
    if gamma.degree() != 1 {
        return invalid("cocycle condition applies to degree-one cochains");
    }
    let dg = apply_differential(p, gamma)?;
    let slots = p.slots(2);
    Ok(dg.values().iter().zip(slots).find(|(v, _)| v.iter().any(|&x| x != 0)).map(|(_, s)| s))
}

/// A 0-cochain `β` with `dβ = γ`, chosen lexicographically least in
/// coordinates, or `None` when `γ` is a cocycle that is not a coboundary.
pub fn coboundary_witness(p: &BundlePresentation, gamma: &Cochain) -> Result<Option<Cochain>> {
    if let Some((s, c)) = cocycle_defect(p, gamma)? {
        return invalid(format!("cochain is not a cocycle: condition fails on {s} component {c}"));
    }
    let d0 = differential(p, 0)?;
    match d0.solve(&gamma.flat())? {
        Some(b) => Ok(Some(p.cochain_from_flat(0, &b)?)),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::cover::families::{circle, interval, triangle};
    use crate::cech::cover::CoverComplex;
    use crate::cech::presentation::families::mobius_z4;

    fn z(n: i64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n)
    }

    #[test]
    fn circle_h1_is_fiber() {
        let p = BundlePresentation::constant(circle(3), &z(2));
        assert_eq!(cohomology(&p, 1).unwrap().group().moduli(), &[2]);
        assert_eq!(cohomology(&p, 0).unwrap().group().moduli(), &[2]);
        let p = BundlePresentation::constant(circle(2), &z(6));
        assert_eq!(cohomology(&p, 1).unwrap().group().order(), 6);
        let p = BundlePresentation::constant(interval(4), &z(6));
        assert!(cohomology(&p, 1).unwrap().group().is_trivial());
    }

    #[test]
    fn twisted_circle_cohomology() {
        // H^0 = fixed points of -1 on Z/4, H^1 = coinvariants
        let p = mobius_z4();
        assert_eq!(cohomology(&p, 0).unwrap().group().moduli(), &[2]);
        assert_eq!(cohomology(&p, 1).unwrap().group().moduli(), &[2]);
    }

    #[test]
    fn witness_examples() {
        // slots are ordered (0,1), (0,2), (1,2)
        let p = BundlePresentation::constant(circle(3), &z(2));
        let g = p.normalize_oriented(&[(0, 1, 0, vec![1]), (1, 2, 0, vec![1]), (0, 2, 0, vec![0])]).unwrap();
        let b = coboundary_witness(&p, &g).unwrap().unwrap();
        assert_eq!(apply_differential(&p, &b).unwrap(), g);
        // (1,0,1) also works; the canonical choice is the least one
        assert_eq!(b.flat(), vec![0, 1, 0]);
        let g = p.normalize_oriented(&[(0, 1, 0, vec![1]), (1, 2, 0, vec![0]), (0, 2, 0, vec![0])]).unwrap();
        assert!(coboundary_witness(&p, &g).unwrap().is_none());
    }

    #[test]
    fn non_cocycle_rejected() {
        let p = BundlePresentation::constant(triangle(), &z(3));
        let g = p.cochain(1, vec![vec![1], vec![0], vec![0]]).unwrap();
        assert_eq!(cocycle_defect(&p, &g).unwrap(), Some((Simplex::triangle(0, 1, 2), 0)));
        assert!(coboundary_witness(&p, &g).is_err());
    }

    #[test]
    fn d_squared_zero_on_triangle() {
        let z4 = z(4);
        let flip = GroupHom::scalar(&z4, -1).unwrap();
        let p = BundlePresentation::new(
            triangle(),
            vec![z4.clone(); 3],
            [(Simplex::edge(0, 1), 0, flip.clone()), (Simplex::edge(0, 2), 0, flip)],
        )
        .unwrap();
        let dd = differential(&p, 1).unwrap().compose(&differential(&p, 0).unwrap()).unwrap();
        assert!(dd.is_zero());
        assert!(cohomology(&p, 1).unwrap().group().is_trivial());
    }

    /// `|H¹|` by enumerating cocycles and coboundaries.
    fn brute_h1_order(p: &BundlePresentation) -> u128 {
        let d0 = differential(p, 0).unwrap();
        let d1 = differential(p, 1).unwrap();
        let c1 = p.cochain_group(1);
        let cocycles = c1.elements().filter(|x| d1.apply(x).unwrap().iter().all(|&v| v == 0)).count();
        let mut bounds: Vec<Element> = d0.domain().elements().map(|b| d0.apply(&b).unwrap()).collect();
        bounds.sort();
        bounds.dedup();
        cocycles as u128 / bounds.len() as u128
    }

    #[test]
    fn coordinates_round_trip() {
        let p = mobius_z4();
        let h = cohomology(&p, 1).unwrap();
        for class in h.group().elements() {
            let rep = h.representative(&class).unwrap();
            assert_eq!(h.class_of(&rep).unwrap(), class);
        }
    }

    use proptest::prelude::*;

    fn arb_presentation() -> impl Strategy<Value = BundlePresentation> {
        // a cover of 3 patches with random overlap components, constant or
        // twisted fiber
        (prop::sample::select(vec![2i64, 3, 4, 6]), 0usize..3, 0usize..3, 0usize..3, any::<bool>(), any::<bool>()).prop_map(
            |(m, a, b, c, triple, twist)| {
                let mut comps = vec![(Simplex::edge(0, 1), a), (Simplex::edge(1, 2), b), (Simplex::edge(0, 2), c)];
                let has_triple = triple && a == 1 && b == 1 && c == 1;
                if has_triple {
                    comps.push((Simplex::triangle(0, 1, 2), 1));
                }
                let cover = CoverComplex::new(3, comps, []).unwrap();
                let g = FiniteAbelianGroup::cyclic(m);
                let mut glue = Vec::new();
                if twist && a > 0 && !has_triple {
                    glue.push((Simplex::edge(0, 1), 0, GroupHom::scalar(&g, -1).unwrap()));
                }
                BundlePresentation::new(cover, vec![g; 3], glue).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn h1_matches_enumeration(p in arb_presentation()) {
            let h = cohomology(&p, 1).unwrap();
            prop_assert_eq!(h.group().order(), brute_h1_order(&p));
        }

        #[test]
        fn witness_matches_enumeration(p in arb_presentation(), pick in 0usize..10_000) {
            let d0 = differential(&p, 0).unwrap();
            let d1 = differential(&p, 1).unwrap();
            let cocycles: Vec<Element> = p.cochain_group(1).elements()
                .filter(|x| d1.apply(x).unwrap().iter().all(|&v| v == 0)).collect();
            let g = &cocycles[pick % cocycles.len()];
            let gamma = p.cochain_from_flat(1, g).unwrap();
            let brute = d0.domain().elements().find(|b| &d0.apply(b).unwrap() == g);
            let found = coboundary_witness(&p, &gamma).unwrap().map(|c| c.flat());
            prop_assert_eq!(found, brute);
        }
    }
}
