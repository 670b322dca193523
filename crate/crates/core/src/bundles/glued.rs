use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use super::pointed::PointedCover;
use super::PrincipalBundle;
use crate::abelian::{Element, FiniteAbelianGroup};
use crate::cech::{BundlePresentation, Cochain, Simplex};
use crate::error::invalid;
use crate::{Error, Result};

/// The total space of a principal bundle over a pointed cover: classes of
/// pairs `(s, i)` with `s ∈ S_u`, `u ∈ U_i`, where `(s, i) ≡ (t, j)` iff
/// `s = γ_ij(u) + t`.
#[derive(Clone, Debug)]
pub struct GluedSpace {
    presentation: BundlePresentation,
    pointed: PointedCover,
    base: Vec<usize>,
    /// `charts[(i, u)][k]` is the point `φ_i⁻¹(k-th element of S_u)`
    charts: BTreeMap<(usize, usize), Vec<usize>>,
    /// `coords[x][&i]` is the element index of `φ_i(x)`
    coords: Vec<BTreeMap<usize, usize>>,
    /// `action[x][k]` is `s·x` for the `k`-th element `s` of the fiber
    action: Vec<Vec<usize>>,
}

/// `γ_ij(u) ∈ S_u` for an ordered pair of patches containing `u`.
pub(crate) fn transition_at(pc: &PointedCover, b: &PrincipalBundle, i: usize, j: usize, u: usize) -> Result<Element> {
    let p = b.presentation();
    let fiber = pc.fiber(p, u);
    if i == j {
        return Ok(fiber.zero());
    }
    let e = Simplex::edge(i, j);
    let c = pc.component(u, &e).ok_or_else(|| Error::InvalidInput(format!("point {u} is not in both patches {i} and {j}")))?;
    let v = p.value(b.cocycle(), &e, c)?;
    let v = pc.chart_to_fiber(p, e.least(), u)?.apply(v)?;
    Ok(if i < j { v } else { fiber.neg(&v) })
}

pub fn glue_total_space(pc: &PointedCover, b: &PrincipalBundle) -> Result<GluedSpace> {
    let p = b.presentation();
    pc.check_presentation(p)?;
    let mut node = BTreeMap::new();
    let mut nodes = Vec::new();
    for u in 0..pc.len() {
        let order = pc.fiber(p, u).order() as usize;
        for &i in pc.patches_of(u) {
            for k in 0..order {
                node.insert((u, i, k), nodes.len());
                nodes.push((u, i, k));
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(nodes.len());
    for u in 0..pc.len() {
        let fiber = pc.fiber(p, u);
        let member = pc.patches_of(u);
        for (a, &i) in member.iter().enumerate() {
            for &j in &member[a + 1..] {
                let g = transition_at(pc, b, i, j, u)?;
                for (k, s) in fiber.elements().enumerate() {
                    let t = fiber.sub(&s, &g);
                    uf.union(node[&(u, i, k)], node[&(u, j, fiber.index_of(&t))]);
                }
            }
        }
    }
    let mut id_of_root = BTreeMap::new();
    let mut base = Vec::new();
    let mut charts: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (n, &(u, i, k)) in nodes.iter().enumerate() {
        let root = uf.find(n);
        let x = *id_of_root.entry(root).or_insert_with(|| {
            base.push(u);
            base.len() - 1
        });
        let chart = charts.entry((i, u)).or_default();
        debug_assert_eq!(chart.len(), k);
        chart.push(x);
    }
    let mut coords = vec![BTreeMap::new(); base.len()];
    for (&(i, u), chart) in &charts {
        for (k, &x) in chart.iter().enumerate() {
            if coords[x].insert(i, k).is_some() {
                return invalid(format!("gluing identifies two elements of chart {i} over point {u}; the cocycle condition fails there"));
            }
        }
    }
    for u in 0..pc.len() {
        let count = base.iter().filter(|&&v| v == u).count() as u128;
        if count != pc.fiber(p, u).order() {
            return Err(Error::InternalInconsistency(format!("fiber over point {u} has {count} points")));
        }
    }
    let mut g = GluedSpace { presentation: p.clone(), pointed: pc.clone(), base, charts, coords, action: Vec::new() };
    g.action = (0..g.len())
        .map(|x| {
            let u = g.base[x];
            let fiber = g.fiber(u).clone();
            fiber.elements().map(|s| g.act_via(pc.home(u), &s, x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(g)
}

impl GluedSpace {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn presentation(&self) -> &BundlePresentation {
        &self.presentation
    }

    pub fn pointed_cover(&self) -> &PointedCover {
        &self.pointed
    }

    /// `q(x)`.
    pub fn base(&self, x: usize) -> usize {
        self.base[x]
    }

    pub fn fiber(&self, u: usize) -> &FiniteAbelianGroup {
        self.pointed.fiber(&self.presentation, u)
    }

    pub fn points_over(&self, u: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.base[x] == u).collect()
    }

    /// `φ_i(x) ∈ S_{q(x)}`.
    pub fn phi(&self, i: usize, x: usize) -> Result<Element> {
        let k =
            self.coords.get(x).and_then(|c| c.get(&i)).ok_or_else(|| Error::InvalidInput(format!("point {x} is not over patch {i}")))?;
        Ok(self.fiber(self.base[x]).element_at(*k))
    }

    /// `φ_i⁻¹(s)` over `u`.
    pub fn phi_inv(&self, i: usize, u: usize, s: &[i64]) -> Result<usize> {
        let chart = self.charts.get(&(i, u)).ok_or_else(|| Error::InvalidInput(format!("point {u} is not in patch {i}")))?;
        let fiber = self.fiber(u);
        fiber.check(s)?;
        Ok(chart[fiber.index_of(s)])
    }

    /// `φ_i⁻¹(s + φ_i(x))`.
    pub fn act_via(&self, i: usize, s: &[i64], x: usize) -> Result<usize> {
        let u = self.base[x];
        let fiber = self.fiber(u);
        fiber.check(s)?;
        let t = fiber.add(s, &self.phi(i, x)?);
        self.phi_inv(i, u, &t)
    }

    /// `s·x` from the action table.
    pub fn act(&self, s: &[i64], x: usize) -> Result<usize> {
        if x >= self.len() {
            return invalid(format!("no point {x}"));
        }
        let fiber = self.fiber(self.base[x]);
        if !fiber.contains(s) {
            return invalid(format!("{s:?} is not an element of the fiber {fiber} over the base of point {x}"));
        }
        Ok(self.action[x][fiber.index_of(s)])
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Replaces the action table, e.g. to test the axiom checks on actions
    /// that do not come from gluing.
    pub fn with_action_table(mut self, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != self.len() {
            return invalid("action table must have one row per point");
        }
        for (x, row) in table.iter().enumerate() {
            let u = self.base[x];
            if row.len() as u128 != self.fiber(u).order() || row.iter().any(|&y| y >= self.len() || self.base[y] != u) {
                return invalid(format!("action row of point {x} must map into the fiber over its base"));
            }
        }
        self.action = table;
        Ok(self)
    }
}

/// Flags from checking that the action makes a principal bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalAxioms {
    /// the table is an action: `0·x = x`, `(s+t)·x = s·(t·x)`
    pub action: bool,
    pub free: bool,
    pub orbit_transitive: bool,
    /// `φ_i(s·x) = s + φ_i(x)` for every chart
    pub equivariant: bool,
    /// properness has no content for finite discrete spaces
    pub proper: &'static str,
}

impl PrincipalAxioms {
    pub fn all_hold(&self) -> bool {
        self.action && self.free && self.orbit_transitive && self.equivariant
    }
}

pub fn check_principal_axioms(g: &GluedSpace) -> PrincipalAxioms {
    let mut action = true;
    let mut free = true;
    let mut orbit_transitive = true;
    let mut equivariant = true;
    for x in 0..g.len() {
        let u = g.base[x];
        let fiber = g.fiber(u);
        let elems: Vec<Element> = fiber.elements().collect();
        let row = &g.action[x];
        if row[0] != x {
            action = false;
        }
        for (a, s) in elems.iter().enumerate() {
            if a != 0 && row[a] == x {
                free = false;
            }
            for (b, t) in elems.iter().enumerate() {
                let st = fiber.index_of(&fiber.add(s, t));
                if g.action[x][st] != g.action[g.action[x][b]][a] {
                    action = false;
                }
            }
            for &i in g.coords[x].keys() {
                let lhs = g.phi(i, row[a]).expect("chart over base");
                let rhs = fiber.add(s, &g.phi(i, x).expect("chart over base"));
                if lhs != rhs {
                    equivariant = false;
                }
            }
        }
        let mut orbit = row.clone();
        orbit.sort_unstable();
        orbit.dedup();
        if orbit != g.points_over(u) {
            orbit_transitive = false;
        }
    }
    PrincipalAxioms { action, free, orbit_transitive, equivariant, proper: "not-applicable" }
}

/// Recovers transition functions from the sections `σ_i(u) = φ_i⁻¹(0)`:
/// `γ_ij(u)` is the element with `γ_ij(u)·σ_i(u) = σ_j(u)`. Every overlap
/// component must contain a sample point, and the values must agree on it.
pub fn trivialization_from_sections(g: &GluedSpace) -> Result<Cochain> {
    let p = &g.presentation;
    let pc = &g.pointed;
    let mut values = Vec::new();
    for (e, c) in p.slots(1) {
        let (i, j) = (e.vertices()[0], e.vertices()[1]);
        let pts = pc.points_in(&e, c);
        if pts.is_empty() {
            return invalid(format!("no sample point in {e} component {c}"));
        }
        let mut value: Option<Element> = None;
        for u in pts {
            let fiber = g.fiber(u);
            let si = g.phi_inv(i, u, &fiber.zero())?;
            let sj = g.phi_inv(j, u, &fiber.zero())?;
            // find s with s·σ_i = σ_j
            let s = fiber
                .elements()
                .find(|s| g.act(s, si).ok() == Some(sj))
                .ok_or_else(|| Error::InvalidInput(format!("sections over point {u} lie in different orbits")))?;
            let local = pc.chart_to_fiber(p, i, u)?.inverse()?.apply(&s)?;
            match &value {
                None => value = Some(local),
                Some(v) if *v == local => {}
                Some(v) => {
                    return Err(Error::DiscontinuousSection(format!("transition on {e} component {c} takes values {v:?} and {local:?}")))
                }
            }
        }
        values.push(value.expect("component has points"));
    }
    p.cochain(1, values)
}
