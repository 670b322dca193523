//! Exact arithmetic for finite abelian groups `Z/m₁ × … × Z/m_k`.
//!
//! Elements are coordinate vectors reduced into `[0, mᵢ)`. Groups produced by
//! [`quotient`], [`subgroup`], [`GroupHom::kernel`] and [`GroupHom::image`]
//! come out in invariant-factor form (`d₁ | d₂ | …`); direct products keep the
//! moduli of their factors so that coordinates stay aligned with the factors.

mod character;
mod matrix;

pub use character::{double_dual, dual_group, dual_hom, pairing, Character, Phase};
pub use matrix::{hermite_rows, smith_normal_form, IntMatrix, SmithForm};

use std::fmt;

use matrix::{ck_add, ck_mul};

use crate::error::invalid;
use crate::{Error, Result};

/// Largest modulus accepted, keeping all intermediate products inside `i64`.
pub const MAX_MODULUS: i64 = 1 << 31;

pub type Element = Vec<i64>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAbelianGroup {
    moduli: Vec<i64>,
}

impl FiniteAbelianGroup {
    /// `Z/m₁ × … × Z/m_k`; factors equal to 1 are dropped.
    pub fn new(moduli: &[i64]) -> Result<Self> {
        for &m in moduli {
            if !(1..=MAX_MODULUS).contains(&m) {
                return invalid(format!("modulus {m} outside [1, 2^31]"));
            }
        }
        Ok(FiniteAbelianGroup { moduli: moduli.iter().copied().filter(|&m| m != 1).collect() })
    }

    /// Like [`new`](Self::new) but additionally requires `d₁ | d₂ | …`.
    pub fn from_invariant_factors(factors: &[i64]) -> Result<Self> {
        let g = Self::new(factors)?;
        if g.moduli.windows(2).any(|w| w[1] % w[0] != 0) {
            return invalid(format!("{factors:?} is not a divisibility chain"));
        }
        Ok(g)
    }

    pub fn cyclic(n: i64) -> Self {
        Self::new(&[n]).expect("cyclic group order out of range")
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { moduli: Vec::new() }
    }

    pub fn product(groups: &[FiniteAbelianGroup]) -> Self {
        FiniteAbelianGroup { moduli: groups.iter().flat_map(|g| g.moduli.iter().copied()).collect() }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u128 {
        self.moduli.iter().fold(1u128, |acc, &m| acc.saturating_mul(m as u128))
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> i64 {
        self.moduli.iter().fold(1i64, |acc, &m| num_integer::lcm(acc, m))
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.is_empty()
    }

    /// Canonical invariant factors (`d₁ | d₂ | …`, no 1s).
    pub fn invariant_factors(&self) -> Vec<i64> {
        if self.moduli.windows(2).all(|w| w[1] % w[0] == 0) {
            return self.moduli.clone();
        }
        let snf = smith_normal_form(&IntMatrix::diagonal(&self.moduli)).expect("diagonal of bounded moduli cannot overflow");
        snf.diagonal().into_iter().filter(|&d| d != 1).collect()
    }

    pub fn is_isomorphic(&self, other: &FiniteAbelianGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        e.len() == self.rank() && e.iter().zip(&self.moduli).all(|(&a, &m)| (0..m).contains(&a))
    }

    pub fn check(&self, e: &[i64]) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            invalid(format!("{e:?} is not a reduced element of {self}"))
        }
    }

    /// Reduces an arbitrary integer vector into canonical coordinates.
    pub fn reduce(&self, v: &[i64]) -> Result<Element> {
        if v.len() != self.rank() {
            return invalid(format!("vector {v:?} has wrong length for {self}"));
        }
        Ok(v.iter().zip(&self.moduli).map(|(&a, &m)| a.rem_euclid(m)).collect())
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Element {
        a.iter().zip(b).zip(&self.moduli).map(|((&x, &y), &m)| (x + y).rem_euclid(m)).collect()
    }

    pub fn neg(&self, a: &[i64]) -> Element {
        a.iter().zip(&self.moduli).map(|(&x, &m)| (-x).rem_euclid(m)).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Element {
        a.iter().zip(b).zip(&self.moduli).map(|((&x, &y), &m)| (x - y).rem_euclid(m)).collect()
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Element {
        a.iter().zip(&self.moduli).map(|(&x, &m)| ((k.rem_euclid(m) as i128 * x as i128).rem_euclid(m as i128)) as i64).collect()
    }

    /// Additive order of an element.
    pub fn element_order(&self, a: &[i64]) -> i64 {
        a.iter().zip(&self.moduli).fold(1, |acc, (&x, &m)| num_integer::lcm(acc, m / num_integer::gcd(x, m)))
    }

    /// All elements in lexicographic order (last coordinate fastest).
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let n = self.order();
        (0..n).map(move |idx| self.element_at(idx as usize))
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut e = vec![0; self.rank()];
        for (slot, &m) in e.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx % m as usize) as i64;
            idx /= m as usize;
        }
        e
    }

    pub fn index_of(&self, e: &[i64]) -> usize {
        e.iter().zip(&self.moduli).fold(0usize, |acc, (&a, &m)| acc * m as usize + a as usize)
    }

    /// The `k`-th standard generator (a 1 in slot `k`).
    pub fn generator(&self, k: usize) -> Element {
        let mut e = self.zero();
        e[k] = 1;
        e
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Homomorphism given by an integer matrix acting on coordinate columns.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    domain: FiniteAbelianGroup,
    codomain: FiniteAbelianGroup,
    matrix: IntMatrix,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.domain, self.codomain, self.matrix)
    }
}

impl GroupHom {
    /// Validates `M[i][j]·d_j ≡ 0 (mod d_i)` and reduces entries mod `d_i`.
    pub fn new(domain: FiniteAbelianGroup, codomain: FiniteAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return invalid(format!(
                "matrix is {}x{} but hom {domain} -> {codomain} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.rank(),
                domain.rank()
            ));
        }
        let mut m = matrix;
        for i in 0..codomain.rank() {
            let di = codomain.moduli[i];
            for j in 0..domain.rank() {
                let x = m.get(i, j).rem_euclid(di);
                if (x as i128 * domain.moduli[j] as i128) % di as i128 != 0 {
                    return invalid(format!("entry ({i},{j}) = {x} is not well defined: {x}*{} is not 0 mod {di}", domain.moduli[j]));
                }
                m.set(i, j, x);
            }
        }
        Ok(GroupHom { domain, codomain, matrix: m })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        GroupHom { domain: g.clone(), codomain: g.clone(), matrix: IntMatrix::identity(g.rank()) }
    }

    pub fn zero(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Self {
        GroupHom { domain: domain.clone(), codomain: codomain.clone(), matrix: IntMatrix::zeros(codomain.rank(), domain.rank()) }
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FiniteAbelianGroup, k: i64) -> Result<Self> {
        let d: Vec<i64> = vec![k; g.rank()];
        Self::new(g.clone(), g.clone(), IntMatrix::diagonal(&d))
    }

    pub fn domain(&self) -> &FiniteAbelianGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteAbelianGroup {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[i64]) -> Result<Element> {
        self.domain.check(x)?;
        self.codomain.reduce(&self.matrix.mul_vec(x)?)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.codomain != self.domain {
            return invalid(format!("cannot compose {:?} after {:?}", self, inner));
        }
        GroupHom::new(inner.domain.clone(), self.codomain.clone(), self.matrix.mul(&inner.matrix)?)
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return invalid("adding homs with different signatures");
        }
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m.set(i, j, ck_add(m.get(i, j), other.matrix.get(i, j))?);
            }
        }
        GroupHom::new(self.domain.clone(), self.codomain.clone(), m)
    }

    pub fn neg(&self) -> GroupHom {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m.set(i, j, -m.get(i, j));
            }
        }
        GroupHom::new(self.domain.clone(), self.codomain.clone(), m).expect("negation preserves well-definedness")
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|i| (0..self.matrix.cols()).all(|j| self.matrix.get(i, j) == 0))
    }

    /// Kernel with its inclusion into the domain.
    pub fn kernel(&self) -> Result<(FiniteAbelianGroup, GroupHom)> {
        let gens = self.kernel_lattice()?;
        subgroup(&self.domain, &gens)
    }

    /// Image with its inclusion into the codomain.
    pub fn image(&self) -> Result<(FiniteAbelianGroup, GroupHom)> {
        let gens: Vec<Element> = (0..self.domain.rank()).map(|j| self.matrix.column(j)).collect();
        subgroup(&self.codomain, &gens)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image()?.0.order() == self.codomain.order())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.domain.order() == self.codomain.order() && self.is_injective()?)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism()? {
            return invalid(format!("{self:?} is not an isomorphism"));
        }
        let cols: Result<Vec<Element>> = (0..self.codomain.rank())
            .map(|k| {
                self.solve(&self.codomain.generator(k))?.ok_or_else(|| Error::InternalInconsistency("isomorphism without preimage".into()))
            })
            .collect();
        GroupHom::new(self.codomain.clone(), self.domain.clone(), IntMatrix::from_columns(&cols?, self.domain.rank())?)
    }

    /// Integer vectors generating `{x : h(x) = 0}` inside `Z^k`
    /// (together with the domain relations).
    fn kernel_lattice(&self) -> Result<Vec<Element>> {
        let k = self.domain.rank();
        let aug = self.matrix.hcat(&IntMatrix::diagonal(&self.codomain.moduli))?;
        let snf = smith_normal_form(&aug)?;
        let r = snf.rank();
        let mut gens: Vec<Element> = (r..aug.cols()).map(|j| snf.v.column(j)[..k].to_vec()).collect();
        gens.extend((0..k).map(|i| {
            let mut e = vec![0; k];
            e[i] = self.domain.moduli[i];
            e
        }));
        Ok(gens)
    }

    /// The lexicographically least `x` with `h(x) = y`, or `None`.
    pub fn solve(&self, y: &[i64]) -> Result<Option<Element>> {
        self.codomain.check(y)?;
        let k = self.domain.rank();
        let aug = self.matrix.hcat(&IntMatrix::diagonal(&self.codomain.moduli))?;
        let snf = smith_normal_form(&aug)?;
        let yp = snf.u.mul_vec(y)?;
        let diag = snf.diagonal();
        let mut w = vec![0i64; aug.cols()];
        for (i, &yi) in yp.iter().enumerate() {
            let d = diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                if yi != 0 {
                    return Ok(None);
                }
            } else if yi % d != 0 {
                return Ok(None);
            } else {
                w[i] = yi / d;
            }
        }
        let z = snf.v.mul_vec(&w)?;
        let x = self.domain.reduce(&z[..k])?;
        let basis = hermite_rows(&self.kernel_lattice()?, k)?;
        Ok(Some(coset_minimum(&x, &basis)?))
    }
}

/// Least representative of `x + L` where `basis` is a full-rank row-HNF of `L`.
fn coset_minimum(x: &[i64], basis: &[Vec<i64>]) -> Result<Element> {
    let mut x = x.to_vec();
    for (j, row) in basis.iter().enumerate() {
        let p = row[j];
        let q = x[j].div_euclid(p);
        if q != 0 {
            for (c, &b) in x.iter_mut().zip(row).skip(j) {
                *c = matrix::ck_sub(*c, ck_mul(q, b)?)?;
            }
        }
    }
    Ok(x)
}

/// The subgroup of `g` generated by `gens`, in invariant-factor form, with
/// its inclusion.
pub fn subgroup(g: &FiniteAbelianGroup, gens: &[Element]) -> Result<(FiniteAbelianGroup, GroupHom)> {
    let k = g.rank();
    let mut rows: Vec<Element> = Vec::with_capacity(gens.len() + k);
    for v in gens {
        rows.push(g.reduce(v)?);
    }
    rows.extend((0..k).map(|i| {
        let mut e = vec![0; k];
        e[i] = g.moduli[i];
        e
    }));
    let basis = hermite_rows(&rows, k)?;
    debug_assert_eq!(basis.len(), k);
    // Express each relation dᵢeᵢ in the basis (triangular solve).
    let mut coeffs = IntMatrix::zeros(k, k);
    for i in 0..k {
        let mut target = vec![0i64; k];
        target[i] = g.moduli[i];
        let mut c = vec![0i64; k];
        for j in 0..k {
            let mut rem = target[j];
            for l in 0..j {
                rem = matrix::ck_sub(rem, ck_mul(c[l], basis[l][j])?)?;
            }
            if rem % basis[j][j] != 0 {
                return Err(Error::InternalInconsistency("relation lattice not contained in span".into()));
            }
            c[j] = rem / basis[j][j];
        }
        for (j, &cj) in c.iter().enumerate().take(k) {
            coeffs.set(j, i, cj);
        }
    }
    // Z^k / colspan(coeffs) in basis coordinates.
    let snf = smith_normal_form(&coeffs)?;
    let diag = snf.diagonal();
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let sub = FiniteAbelianGroup::new(&keep.iter().map(|&i| diag[i]).collect::<Vec<_>>())?;
    let basis_t = IntMatrix::from_columns(&basis, k)?;
    let full = basis_t.mul(&snf.u_inv)?;
    let mut inc = IntMatrix::zeros(k, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for r in 0..k {
            inc.set(r, c, full.get(r, i));
        }
    }
    let inclusion = GroupHom::new(sub.clone(), g.clone(), inc)?;
    Ok((sub, inclusion))
}

/// `g / ⟨gens⟩` in invariant-factor form, with the projection.
pub fn quotient(g: &FiniteAbelianGroup, gens: &[Element]) -> Result<(FiniteAbelianGroup, GroupHom)> {
    let k = g.rank();
    let mut cols: Vec<Element> = Vec::with_capacity(gens.len() + k);
    for v in gens {
        cols.push(g.reduce(v)?);
    }
    cols.extend((0..k).map(|i| {
        let mut e = vec![0; k];
        e[i] = g.moduli[i];
        e
    }));
    let rel = IntMatrix::from_columns(&cols, k)?;
    let snf = smith_normal_form(&rel)?;
    let diag = snf.diagonal();
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let q = FiniteAbelianGroup::new(&keep.iter().map(|&i| diag[i]).collect::<Vec<_>>())?;
    let mut proj = IntMatrix::zeros(keep.len(), k);
    for (r, &i) in keep.iter().enumerate() {
        for c in 0..k {
            proj.set(r, c, snf.u.get(i, c));
        }
    }
    let projection = GroupHom::new(g.clone(), q.clone(), proj)?;
    Ok((q, projection))
}

/// Block-diagonal sum of homomorphisms `⊕ hᵢ : ⊕ Aᵢ → ⊕ Bᵢ`.
pub fn direct_sum(homs: &[GroupHom]) -> Result<GroupHom> {
    let dom = FiniteAbelianGroup::product(&homs.iter().map(|h| h.domain.clone()).collect::<Vec<_>>());
    let cod = FiniteAbelianGroup::product(&homs.iter().map(|h| h.codomain.clone()).collect::<Vec<_>>());
    let mut m = IntMatrix::zeros(cod.rank(), dom.rank());
    let (mut r0, mut c0) = (0, 0);
    for h in homs {
        for i in 0..h.codomain.rank() {
            for j in 0..h.domain.rank() {
                m.set(r0 + i, c0 + j, h.matrix.get(i, j));
            }
        }
        r0 += h.codomain.rank();
        c0 += h.domain.rank();
    }
    GroupHom::new(dom, cod, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n)
    }

    fn hom(d: &FiniteAbelianGroup, c: &FiniteAbelianGroup, rows: &[Vec<i64>]) -> GroupHom {
        GroupHom::new(d.clone(), c.clone(), IntMatrix::from_rows(rows, d.rank()).unwrap()).unwrap()
    }

    /// Brute-force kernel by enumeration.
    fn brute_kernel(h: &GroupHom) -> Vec<Element> {
        h.domain().elements().filter(|x| h.apply(x).unwrap() == h.codomain().zero()).collect()
    }

    fn subgroup_elements(inc: &GroupHom) -> Vec<Element> {
        let mut v: Vec<Element> = inc.domain().elements().map(|w| inc.apply(&w).unwrap()).collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn kernel_examples() {
        let h = hom(&z(4), &z(4), &[vec![2]]);
        let (k, inc) = h.kernel().unwrap();
        assert_eq!(k.invariant_factors(), vec![2]);
        assert_eq!(subgroup_elements(&inc), vec![vec![0], vec![2]]);
        assert_eq!(brute_kernel(&h), vec![vec![0], vec![2]]);

        let (k, _) = GroupHom::identity(&z(6)).kernel().unwrap();
        assert!(k.is_trivial());

        let (k, _) = GroupHom::zero(&z(3), &z(3)).kernel().unwrap();
        assert_eq!(k.invariant_factors(), vec![3]);
    }

    #[test]
    fn quotient_examples() {
        let (q, p) = quotient(&z(4), &[vec![2]]).unwrap();
        assert_eq!(q.moduli(), &[2]);
        // coset enumeration oracle: x ~ y iff x - y in {0, 2}
        for x in z(4).elements() {
            for y in z(4).elements() {
                let same = (x[0] - y[0]).rem_euclid(2) == 0;
                assert_eq!(p.apply(&x).unwrap() == p.apply(&y).unwrap(), same);
            }
        }
        let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let (q, p) = quotient(&g, &[vec![1, 1]]).unwrap();
        assert_eq!(q.moduli(), &[2]);
        assert_eq!(p.apply(&[1, 1]).unwrap(), q.zero());
        assert_ne!(p.apply(&[1, 0]).unwrap(), q.zero());
        let (q, p) = quotient(&g, &[]).unwrap();
        assert!(q.is_isomorphic(&g));
        assert!(p.is_isomorphism().unwrap());
    }

    #[test]
    fn solve_examples() {
        let h = hom(&z(4), &z(4), &[vec![2]]);
        assert_eq!(h.solve(&[2]).unwrap(), Some(vec![1]));
        assert_eq!(h.solve(&[1]).unwrap(), None);
        let id = GroupHom::identity(&z(7));
        assert_eq!(id.solve(&[5]).unwrap(), Some(vec![5]));
    }

    #[test]
    fn solve_is_lex_least() {
        let g = FiniteAbelianGroup::new(&[2, 4]).unwrap();
        let h = hom(&g, &z(4), &[vec![2, 2]]);
        for y in z(4).elements() {
            let brute = g.elements().find(|x| h.apply(x).unwrap() == y);
            assert_eq!(h.solve(&y).unwrap(), brute);
        }
    }

    #[test]
    fn ill_defined_hom_rejected() {
        let r = GroupHom::new(z(2), z(4), IntMatrix::from_rows(&[vec![1]], 1).unwrap());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
        assert!(GroupHom::new(z(2), z(4), IntMatrix::from_rows(&[vec![2]], 1).unwrap()).is_ok());
    }

    #[test]
    fn invariant_factor_normalization() {
        let g = FiniteAbelianGroup::new(&[2, 3]).unwrap();
        assert_eq!(g.invariant_factors(), vec![6]);
        let g = FiniteAbelianGroup::new(&[1, 4, 1, 2]).unwrap();
        assert_eq!(g.moduli(), &[4, 2]);
        assert_eq!(g.invariant_factors(), vec![2, 4]);
        assert!(FiniteAbelianGroup::from_invariant_factors(&[4, 2]).is_err());
        assert_eq!(FiniteAbelianGroup::trivial().order(), 1);
        assert_eq!(g.to_string(), "Z4xZ2");
    }

    #[test]
    fn inverse_of_negation() {
        let h = hom(&z(4), &z(4), &[vec![3]]);
        let inv = h.inverse().unwrap();
        assert_eq!(inv.compose(&h).unwrap(), GroupHom::identity(&z(4)));
    }

    #[test]
    fn element_indexing_round_trip() {
        let g = FiniteAbelianGroup::new(&[2, 3, 4]).unwrap();
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.index_of(&e), i);
        }
    }

    use proptest::prelude::*;

    fn arb_hom() -> impl Strategy<Value = GroupHom> {
        let moduli = proptest::collection::vec(1i64..7, 0..3);
        (moduli.clone(), moduli, proptest::collection::vec(0i64..50, 9)).prop_map(|(dm, cm, seed)| {
            let d = FiniteAbelianGroup::new(&dm).unwrap();
            let c = FiniteAbelianGroup::new(&cm).unwrap();
            // project each seed entry onto the well-defined multiples
            let mut m = IntMatrix::zeros(c.rank(), d.rank());
            for i in 0..c.rank() {
                for j in 0..d.rank() {
                    let (di, dj) = (c.moduli()[i], d.moduli()[j]);
                    let step = di / num_integer::gcd(di, dj);
                    m.set(i, j, seed[i * 3 + j] * step);
                }
            }
            GroupHom::new(d, c, m).unwrap()
        })
    }

    proptest! {
        #[test]
        fn kernel_image_orders(h in arb_hom()) {
            let (k, kinc) = h.kernel().unwrap();
            let (im, iinc) = h.image().unwrap();
            prop_assert_eq!(k.order() * im.order(), h.domain().order());
            prop_assert!(kinc.is_injective().unwrap());
            prop_assert!(iinc.is_injective().unwrap());
            let mut brute = brute_kernel(&h);
            brute.sort();
            prop_assert_eq!(subgroup_elements(&kinc), brute);
        }

        #[test]
        fn solve_matches_enumeration(h in arb_hom(), pick in 0usize..1000) {
            let n = h.codomain().order() as usize;
            let y = h.codomain().element_at(pick % n);
            let brute = h.domain().elements().find(|x| h.apply(x).unwrap() == y);
            prop_assert_eq!(h.solve(&y).unwrap(), brute);
        }

        #[test]
        fn composition_is_matrix_product(f in arb_hom(), x in 0usize..1000) {
            let g = GroupHom::scalar(f.codomain(), 3).unwrap();
            let gf = g.compose(&f).unwrap();
            let e = f.domain().element_at(x % f.domain().order() as usize);
            prop_assert_eq!(gf.apply(&e).unwrap(), g.apply(&f.apply(&e).unwrap()).unwrap());
        }
    }
}
