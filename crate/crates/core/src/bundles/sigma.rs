use std::collections::BTreeMap;

use super::glued::{glue_total_space, GluedSpace};
use super::pointed::PointedCover;
use super::PrincipalBundle;
use crate::abelian::{quotient, Element, FiniteAbelianGroup, GroupHom};
use crate::cech::{BundlePresentation, CoverComplex, Simplex};
use crate::error::invalid;
use crate::{Error, Result};

/// A finite set with an action of a finite abelian group, given as a table:
/// `table[x][k]` is `h·x` for the `k`-th element `h` of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTrivialSystem {
    group: FiniteAbelianGroup,
    table: Vec<Vec<usize>>,
}

/// Charts over the orbit space: a cover whose patches are sets of orbits,
/// each with a chosen representative point, and the overlap component of
/// each orbit where an overlap is disconnected.
#[derive(Clone, Debug)]
pub struct SigmaCharts {
    pub cover: CoverComplex,
    /// representative points of `X`, one per orbit in the patch
    pub representatives: Vec<Vec<usize>>,
    /// `(orbit, simplex, component)`
    pub components: Vec<(usize, Simplex, usize)>,
}

/// The bundle over `X/H` with fibers `H/H_x`, together with the glued space
/// and the equivariant bijection from `X` onto it.
#[derive(Clone, Debug)]
pub struct SigmaTrivialBundle {
    /// orbits ordered by their least point
    pub orbits: Vec<Vec<usize>>,
    /// `H/H_x` for each orbit, with the projection from `H`
    pub fibers: Vec<(FiniteAbelianGroup, GroupHom)>,
    pub presentation: BundlePresentation,
    pub bundle: PrincipalBundle,
    pub pointed: PointedCover,
    pub glued: GluedSpace,
    /// `identification[x]` is the glued point corresponding to `x ∈ X`
    pub identification: Vec<usize>,
}

impl SigmaTrivialSystem {
    pub fn new(group: FiniteAbelianGroup, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let elems: Vec<Element> = group.elements().collect();
        for (x, row) in table.iter().enumerate() {
            if row.len() != elems.len() || row.iter().any(|&y| y >= n) {
                return invalid(format!("action row of point {x} must list {} points of X", elems.len()));
            }
            if row[0] != x {
                return invalid(format!("the identity moves point {x}"));
            }
        }
        for (a, h) in elems.iter().enumerate() {
            for (b, k) in elems.iter().enumerate() {
                let hk = group.index_of(&group.add(h, k));
                for x in 0..n {
                    if table[x][hk] != table[table[x][b]][a] {
                        return invalid(format!("table is not an action: (h+k)·{x} differs from h·(k·{x})"));
                    }
                }
            }
        }
        Ok(SigmaTrivialSystem { group, table })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn act(&self, h: &[i64], x: usize) -> usize {
        self.table[x][self.group.index_of(h)]
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.table.len()];
        let mut out = Vec::new();
        for x in 0..self.table.len() {
            if !seen[x] {
                let mut orbit = self.table[x].clone();
                orbit.sort_unstable();
                orbit.dedup();
                for &y in &orbit {
                    seen[y] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    /// `H_x`, listed in element order.
    pub fn stabilizer(&self, x: usize) -> Vec<Element> {
        self.group.elements().filter(|h| self.act(h, x) == x).collect()
    }

    /// One patch per orbit, represented by its least point.
    pub fn default_charts(&self) -> SigmaCharts {
        let orbits = self.orbits();
        let cover = CoverComplex::new(orbits.len().max(1), [], []).expect("discrete cover");
        SigmaCharts { cover, representatives: orbits.iter().map(|o| vec![o[0]]).collect(), components: Vec::new() }
    }

    pub fn bundle(&self, charts: Option<&SigmaCharts>) -> Result<SigmaTrivialBundle> {
        let default;
        let charts = match charts {
            Some(c) => c,
            None => {
                default = self.default_charts();
                &default
            }
        };
        let orbits = self.orbits();
        if orbits.is_empty() {
            return invalid("the space has no points");
        }
        let mut orbit_of = vec![0; self.table.len()];
        for (o, pts) in orbits.iter().enumerate() {
            for &x in pts {
                orbit_of[x] = o;
            }
        }
        let mut stabs = Vec::new();
        let mut fibers = Vec::new();
        for pts in &orbits {
            let st = self.stabilizer(pts[0]);
            fibers.push(quotient(&self.group, &st)?);
            stabs.push(st);
        }
        let patches = charts.cover.patches();
        if charts.representatives.len() != patches {
            return invalid(format!("{} representative lists for {patches} charts", charts.representatives.len()));
        }
        // reps[i][orbit] = representative point
        let mut reps: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); patches];
        let mut membership = vec![Vec::new(); orbits.len()];
        for (i, list) in charts.representatives.iter().enumerate() {
            if list.is_empty() {
                return invalid(format!("chart {i} contains no orbit"));
            }
            for &x in list {
                if x >= self.table.len() {
                    return invalid(format!("chart {i} names point {x}, which does not exist"));
                }
                let o = orbit_of[x];
                if reps[i].insert(o, x).is_some() {
                    return invalid(format!("chart {i} has two representatives of orbit {o}"));
                }
                membership[o].push(i);
            }
            let first = orbit_of[list[0]];
            if list.iter().any(|&x| stabs[orbit_of[x]] != stabs[first]) {
                return invalid(format!("orbits in chart {i} have different stabilizers"));
            }
        }
        let pointed = PointedCover::new(charts.cover.clone(), membership, charts.components.iter().cloned())?;
        let chart_fibers: Vec<FiniteAbelianGroup> =
            (0..patches).map(|i| fibers[*reps[i].keys().next().expect("nonempty chart")].0.clone()).collect();
        let presentation = BundlePresentation::new(charts.cover.clone(), chart_fibers, [])?;
        let mut values = Vec::new();
        for (e, c) in presentation.slots(1) {
            let (i, j) = (e.vertices()[0], e.vertices()[1]);
            let mut value: Option<Element> = None;
            for o in pointed.points_in(&e, c) {
                let (ri, rj) = (reps[i][&o], reps[j][&o]);
                let h = self.group.elements().find(|h| self.act(h, ri) == rj).expect("same orbit");
                let g = fibers[o].1.apply(&h)?;
                match &value {
                    None => value = Some(g),
                    Some(v) if *v == g => {}
                    Some(v) => {
                        return Err(Error::DiscontinuousSection(format!("transition on {e} component {c} takes values {v:?} and {g:?}")))
                    }
                }
            }
            match value {
                Some(v) => values.push(v),
                None => return invalid(format!("no orbit lies in {e} component {c}")),
            }
        }
        let bundle = PrincipalBundle::new(presentation.clone(), presentation.cochain(1, values)?)?;
        let glued = glue_total_space(&pointed, &bundle)?;
        let mut identification = vec![usize::MAX; self.table.len()];
        for (x, slot) in identification.iter_mut().enumerate() {
            let o = orbit_of[x];
            let home = pointed.home(o);
            let r = reps[home][&o];
            let h = self.group.elements().find(|h| self.act(h, r) == x).expect("same orbit");
            *slot = glued.phi_inv(home, o, &fibers[o].1.apply(&h)?)?;
        }
        let mut sorted = identification.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != glued.len() || sorted.len() != identification.len() {
            return Err(Error::InternalInconsistency("X does not map bijectively onto the glued space".into()));
        }
        for x in 0..self.table.len() {
            for h in self.group.elements() {
                let s = fibers[orbit_of[x]].1.apply(&h)?;
                if glued.act(&s, identification[x])? != identification[self.act(&h, x)] {
                    return Err(Error::InternalInconsistency(format!("identification is not equivariant at point {x}")));
                }
            }
        }
        Ok(SigmaTrivialBundle { orbits, fibers, presentation, bundle, pointed, glued, identification })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::check_principal_axioms;
    use crate::cech::families::circle;

    fn translation_table(g: &FiniteAbelianGroup) -> Vec<Vec<usize>> {
        g.elements().map(|x| g.elements().map(|h| g.index_of(&g.add(&x, &h))).collect()).collect()
    }

    #[test]
    fn z4_on_z4_and_z2() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        let mut table = translation_table(&z4);
        for x in 0..2 {
            table.push(z4.elements().map(|h| 4 + ((x + h[0]) % 2) as usize).collect());
        }
        let sys = SigmaTrivialSystem::new(z4, table).unwrap();
        let b = sys.bundle(None).unwrap();
        assert_eq!(b.orbits, vec![vec![0, 1, 2, 3], vec![4, 5]]);
        assert_eq!(b.fibers[0].0.moduli(), &[4]);
        assert_eq!(b.fibers[1].0.moduli(), &[2]);
        assert_eq!(sys.stabilizer(4), vec![vec![0], vec![2]]);
        assert!(check_principal_axioms(&b.glued).all_hold());
    }

    #[test]
    fn free_transitive_is_trivial() {
        let z3 = FiniteAbelianGroup::cyclic(3);
        let sys = SigmaTrivialSystem::new(z3.clone(), translation_table(&z3)).unwrap();
        let b = sys.bundle(None).unwrap();
        assert_eq!(b.presentation.fibers(), &[z3]);
        assert!(b.bundle.class().is_empty());
    }

    #[test]
    fn two_orbits_on_a_circle() {
        let z2 = FiniteAbelianGroup::cyclic(2);
        let table = vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 2]];
        let sys = SigmaTrivialSystem::new(z2, table).unwrap();
        let e = Simplex::edge(0, 1);
        let charts =
            SigmaCharts { cover: circle(2), representatives: vec![vec![0, 2], vec![0, 3]], components: vec![(0, e.clone(), 0), (1, e, 1)] };
        let b = sys.bundle(Some(&charts)).unwrap();
        assert_eq!(b.bundle.class(), &[1]);
        assert!(check_principal_axioms(&b.glued).all_hold());
    }

    #[test]
    fn non_action_rejected() {
        let z2 = FiniteAbelianGroup::cyclic(2);
        assert!(SigmaTrivialSystem::new(z2.clone(), vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(SigmaTrivialSystem::new(z2, vec![vec![1, 0], vec![0, 1]]).is_err());
    }
}
