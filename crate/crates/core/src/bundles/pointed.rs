use std::collections::BTreeMap;

use crate::abelian::{FiniteAbelianGroup, GroupHom};
use crate::cech::{BundlePresentation, CoverComplex, Simplex};
use crate::error::invalid;
use crate::Result;

/// A finite sample of base points on a cover: which patches contain each
/// point and which component of every overlap it lies in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedCover {
    cover: CoverComplex,
    patches: Vec<Vec<usize>>,
    components: Vec<BTreeMap<Simplex, usize>>,
}

impl PointedCover {
    /// `membership[u]` lists the patches containing point `u`. Component
    /// assignments `(u, σ, c)` may be omitted where `U_σ` is connected.
    pub fn new(
        cover: CoverComplex,
        membership: Vec<Vec<usize>>,
        components: impl IntoIterator<Item = (usize, Simplex, usize)>,
    ) -> Result<Self> {
        let n = membership.len();
        let mut given: Vec<BTreeMap<Simplex, usize>> = vec![BTreeMap::new(); n];
        for (u, s, c) in components {
            if u >= n {
                return invalid(format!("component given for point {u}, but there are {n} points"));
            }
            given[u].insert(s, c);
        }
        let mut patches = Vec::with_capacity(n);
        let mut comps = Vec::with_capacity(n);
        for (u, mut member) in membership.into_iter().enumerate() {
            member.sort_unstable();
            member.dedup();
            if member.is_empty() {
                return invalid(format!("point {u} lies in no patch"));
            }
            if let Some(&i) = member.iter().find(|&&i| i >= cover.patches()) {
                return invalid(format!("point {u} lies in patch {i}, which does not exist"));
            }
            let mut assigned = BTreeMap::new();
            for s in subsets(&member) {
                let m = cover.component_count(&s);
                if m == 0 {
                    return invalid(format!("point {u} lies in every patch of {s}, which the cover says is empty"));
                }
                let c = match given[u].remove(&s) {
                    Some(c) => c,
                    None if m == 1 => 0,
                    None => return invalid(format!("point {u} needs a component of {s}")),
                };
                if c >= m {
                    return invalid(format!("{s} has no component {c} (point {u})"));
                }
                assigned.insert(s, c);
            }
            if let Some(s) = given[u].keys().next() {
                return invalid(format!("point {u} is not in every patch of {s}"));
            }
            for (s, &c) in &assigned {
                for t in s.facets() {
                    if cover.face(s, &t, c)? != assigned[&t] {
                        return invalid(format!("components of point {u} in {s} and {t} are inconsistent"));
                    }
                }
            }
            patches.push(member);
            comps.push(assigned);
        }
        Ok(PointedCover { cover, patches, components: comps })
    }

    /// One point in every component of every nonempty simplex, in simplex
    /// order.
    pub fn sample(cover: &CoverComplex) -> Self {
        let mut membership = Vec::new();
        let mut comps = Vec::new();
        for dim in 0..3 {
            for s in cover.simplices(dim) {
                for c in 0..cover.component_count(&s) {
                    let u = membership.len();
                    membership.push(s.vertices().to_vec());
                    for t in subsets(s.vertices()) {
                        comps.push((u, t.clone(), cover.face(&s, &t, c).expect("face of a nonempty simplex")));
                    }
                }
            }
        }
        PointedCover::new(cover.clone(), membership, comps).expect("sample points are consistent")
    }

    pub fn cover(&self) -> &CoverComplex {
        &self.cover
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn patches_of(&self, u: usize) -> &[usize] {
        &self.patches[u]
    }

    pub fn contains(&self, i: usize, u: usize) -> bool {
        self.patches[u].binary_search(&i).is_ok()
    }

    /// The least patch containing `u`; its fiber is the fiber over `u`.
    pub fn home(&self, u: usize) -> usize {
        self.patches[u][0]
    }

    /// The component of `U_σ` containing `u`, if `u ∈ U_σ`.
    pub fn component(&self, u: usize, s: &Simplex) -> Option<usize> {
        self.components[u].get(s).copied()
    }

    /// Points lying in component `c` of `U_σ`.
    pub fn points_in(&self, s: &Simplex, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.component(u, s) == Some(c)).collect()
    }

    /// The fiber `S_u`, expressed in the coordinates of the home patch.
    pub fn fiber<'a>(&self, p: &'a BundlePresentation, u: usize) -> &'a FiniteAbelianGroup {
        p.fiber(self.home(u))
    }

    /// The identification `H_i → S_u` at `u ∈ U_i`.
    pub fn chart_to_fiber(&self, p: &BundlePresentation, i: usize, u: usize) -> Result<GroupHom> {
        let h = self.home(u);
        if !self.contains(i, u) {
            return invalid(format!("point {u} is not in patch {i}"));
        }
        if h == i {
            return Ok(GroupHom::identity(p.fiber(i)));
        }
        let e = Simplex::edge(h, i);
        let c = self.component(u, &e).expect("membership implies an overlap component");
        p.gluing(&e, c).cloned()
    }

    pub fn check_presentation(&self, p: &BundlePresentation) -> Result<()> {
        if p.cover() != &self.cover {
            return invalid("pointed cover and presentation use different covers");
        }
        Ok(())
    }
}

fn subsets(member: &[usize]) -> Vec<Simplex> {
    let mut out = Vec::new();
    for (a, &i) in member.iter().enumerate() {
        out.push(Simplex::vertex(i));
        for (b, &j) in member.iter().enumerate().skip(a + 1) {
            out.push(Simplex::edge(i, j));
            for &k in &member[b + 1..] {
                out.push(Simplex::triangle(i, j, k));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::families::{circle, triangle};

    #[test]
    fn one_point_per_overlap() {
        let pc = PointedCover::new(circle(3), vec![vec![0, 1], vec![1, 2], vec![0, 2]], []).unwrap();
        assert_eq!(pc.home(1), 1);
        assert_eq!(pc.points_in(&Simplex::edge(0, 2), 0), vec![2]);
    }

    #[test]
    fn point_in_empty_overlap_rejected() {
        // arcs 0, 1, 2 of the circle have no common point
        assert!(PointedCover::new(circle(3), vec![vec![0, 1, 2]], []).is_err());
        assert!(PointedCover::new(triangle(), vec![vec![0, 1, 2]], []).is_ok());
    }

    #[test]
    fn two_component_overlap_needs_assignment() {
        assert!(PointedCover::new(circle(2), vec![vec![0, 1]], []).is_err());
        let pc =
            PointedCover::new(circle(2), vec![vec![0, 1], vec![0, 1]], [(0, Simplex::edge(0, 1), 0), (1, Simplex::edge(0, 1), 1)]).unwrap();
        assert_eq!(pc.component(1, &Simplex::edge(0, 1)), Some(1));
    }
}
