use std::collections::BTreeMap;
use std::fmt;

use crate::error::invalid;
use crate::{Error, Result};

/// A strictly increasing tuple of patch indices, `i₀ < … < i_k`, `k ≤ 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut idx: Vec<usize>) -> Result<Self> {
        idx.sort_unstable();
        if idx.is_empty() || idx.len() > 3 {
            return invalid(format!("simplex {idx:?} must have 1 to 3 vertices"));
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("simplex {idx:?} has repeated vertices"));
        }
        Ok(Simplex(idx))
    }

    pub fn vertex(i: usize) -> Self {
        Simplex(vec![i])
    }

    pub fn edge(i: usize, j: usize) -> Self {
        Simplex::new(vec![i, j]).expect("edge needs distinct vertices")
    }

    pub fn triangle(i: usize, j: usize, k: usize) -> Self {
        Simplex::new(vec![i, j, k]).expect("triangle needs distinct vertices")
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn least(&self) -> usize {
        self.0[0]
    }

    /// Faces of codimension one, in the order obtained by deleting vertex
    /// 0, 1, … (so `∂(ijk) = jk, ik, ij`).
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len()).map(|d| Simplex(self.0.iter().enumerate().filter(|&(i, _)| i != d).map(|(_, &v)| v).collect())).collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.0.contains(v))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The nerve of a cover up to triple overlaps, with the connected components
/// of every nonempty overlap and the component maps between faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverComplex {
    patches: usize,
    components: BTreeMap<Simplex, usize>,
    /// codimension-one face maps `Comp(σ) → Comp(τ)`
    faces: BTreeMap<(Simplex, Simplex), Vec<usize>>,
}

impl CoverComplex {
    /// `components` lists the component count of nonempty overlaps; patches
    /// not listed have one component. Face maps may be omitted when the face
    /// has a single component.
    pub fn new(
        patches: usize,
        components: impl IntoIterator<Item = (Simplex, usize)>,
        faces: impl IntoIterator<Item = ((Simplex, Simplex), Vec<usize>)>,
    ) -> Result<Self> {
        if patches == 0 {
            return invalid("a cover needs at least one patch");
        }
        let mut comps: BTreeMap<Simplex, usize> = (0..patches).map(|i| (Simplex::vertex(i), 1)).collect();
        for (s, n) in components {
            if let Some(&v) = s.vertices().last() {
                if v >= patches {
                    return invalid(format!("simplex {s} uses a patch index >= {patches}"));
                }
            }
            if n == 0 {
                comps.remove(&s);
            } else {
                comps.insert(s, n);
            }
        }
        let mut face_maps: BTreeMap<(Simplex, Simplex), Vec<usize>> = BTreeMap::new();
        for ((s, t), map) in faces {
            if !t.is_face_of(&s) || t.dim() + 1 != s.dim() {
                return invalid(format!("{t} is not a facet of {s}"));
            }
            face_maps.insert((s, t), map);
        }
        for (s, &n) in &comps {
            for t in s.facets() {
                let Some(&m) = comps.get(&t) else {
                    return invalid(format!("{s} is nonempty but its face {t} is empty"));
                };
                let map = match face_maps.remove(&(s.clone(), t.clone())) {
                    Some(map) => map,
                    None if m == 1 => vec![0; n],
                    None => return invalid(format!("missing face map {s} -> {t}")),
                };
                if map.len() != n || map.iter().any(|&c| c >= m) {
                    return invalid(format!("face map {s} -> {t} must send {n} components into {m}"));
                }
                face_maps.insert((s.clone(), t), map);
            }
        }
        if let Some(((s, t), _)) = face_maps.iter().find(|((s, _), _)| !comps.contains_key(s)) {
            return invalid(format!("face map {s} -> {t} given for an empty overlap"));
        }
        let cover = CoverComplex { patches, components: comps, faces: face_maps };
        cover.check_commuting_faces()?;
        Ok(cover)
    }

    fn check_commuting_faces(&self) -> Result<()> {
        for s in self.simplices(2) {
            for c in 0..self.component_count(&s) {
                for v in s.vertices() {
                    let target = Simplex::vertex(*v);
                    let routes: Vec<usize> = s
                        .facets()
                        .into_iter()
                        .filter(|t| target.is_face_of(t))
                        .map(|t| self.faces[&(t.clone(), target.clone())][self.faces[&(s.clone(), t)][c]])
                        .collect();
                    if routes.windows(2).any(|w| w[0] != w[1]) {
                        return invalid(format!("face maps of {s} component {c} do not commute at patch {v}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn patches(&self) -> usize {
        self.patches
    }

    /// Nonempty simplices of dimension `dim`, sorted.
    pub fn simplices(&self, dim: usize) -> Vec<Simplex> {
        self.components.keys().filter(|s| s.dim() == dim).cloned().collect()
    }

    /// Number of components (0 for an empty overlap).
    pub fn component_count(&self, s: &Simplex) -> usize {
        self.components.get(s).copied().unwrap_or(0)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.components.contains_key(s)
    }

    /// The component of `τ` containing component `c` of `σ`, for any face
    /// `τ ⊆ σ`.
    pub fn face(&self, s: &Simplex, t: &Simplex, c: usize) -> Result<usize> {
        if !t.is_face_of(s) {
            return invalid(format!("{t} is not a face of {s}"));
        }
        if c >= self.component_count(s) {
            return invalid(format!("{s} has no component {c}"));
        }
        let mut cur = s.clone();
        let mut comp = c;
        while cur.dim() > t.dim() {
            let next = cur.facets().into_iter().find(|f| t.is_face_of(f)).expect("facet containing face");
            comp = self.faces[&(cur, next.clone())][comp];
            cur = next;
        }
        Ok(comp)
    }

    pub fn face_map(&self, s: &Simplex, t: &Simplex) -> Option<&[usize]> {
        self.faces.get(&(s.clone(), t.clone())).map(Vec::as_slice)
    }

    pub(crate) fn require(&self, s: &Simplex) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("{s} is not a nonempty simplex of the cover")))
        }
    }
}

/// Covers used by examples and tests.
pub mod families {
    use super::*;

    /// The circle covered by `n` arcs. For `n ≥ 3` consecutive arcs meet in
    /// one component and there are no triple overlaps; for `n = 2` the two
    /// arcs meet in two components.
    pub fn circle(n: usize) -> CoverComplex {
        assert!(n >= 2, "a circle needs at least two arcs");
        if n == 2 {
            return CoverComplex::new(2, [(Simplex::edge(0, 1), 2)], []).expect("two-arc circle");
        }
        let edges = (0..n).map(|i| (Simplex::edge(i, (i + 1) % n), 1));
        CoverComplex::new(n, edges, []).expect("circle cover")
    }

    /// An interval covered by `n` consecutive patches.
    pub fn interval(n: usize) -> CoverComplex {
        let edges = (0..n.saturating_sub(1)).map(|i| (Simplex::edge(i, i + 1), 1));
        CoverComplex::new(n.max(1), edges, []).expect("interval cover")
    }

    pub fn single_patch() -> CoverComplex {
        interval(1)
    }

    /// Three patches with all pairwise and the triple overlap connected.
    pub fn triangle() -> CoverComplex {
        CoverComplex::new(
            3,
            [(Simplex::edge(0, 1), 1), (Simplex::edge(1, 2), 1), (Simplex::edge(0, 2), 1), (Simplex::triangle(0, 1, 2), 1)],
            [],
        )
        .expect("triangle cover")
    }
}
