//! Characters of finite abelian groups and their exact values.

use std::fmt;

use nalgebra::Complex;

use super::matrix::{ck_add, ck_mul};
use super::{Element, FiniteAbelianGroup, GroupHom, IntMatrix};
use crate::error::invalid;
use crate::Result;

/// An exact rational number modulo 1, standing for `exp(2πi·num/den)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let n = num.rem_euclid(den);
        let g = num_integer::gcd(n, den).max(1);
        Phase { num: n / g, den: den / g }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_complex(self) -> Complex<f64> {
        let t = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        Complex::new(t.cos(), t.sin())
    }

    /// Snaps `z` to the nearest `order`-th root of unity if it lies within
    /// `tol` of it.
    pub fn snap(z: Complex<f64>, order: i64, tol: f64) -> Option<Phase> {
        let t = z.im.atan2(z.re) / std::f64::consts::TAU;
        let k = (t * order as f64).round() as i64;
        let p = Phase::new(k, order);
        ((p.to_complex() - z).norm() <= tol).then_some(p)
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;

    fn add(self, other: Phase) -> Phase {
        let den = num_integer::lcm(self.den, other.den);
        Phase::new(self.num * (den / self.den) + other.num * (den / other.den), den)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::new(-self.num, self.den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The character group of `g`. It shares the moduli of `g`; a character with
/// components `c` pairs with `s` to `Σ cᵢ·sᵢ/mᵢ mod 1`.
pub fn dual_group(g: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    g.clone()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    group: FiniteAbelianGroup,
    components: Element,
}

impl Character {
    pub fn new(group: &FiniteAbelianGroup, components: &[i64]) -> Result<Self> {
        Ok(Character { group: group.clone(), components: dual_group(group).reduce(components)? })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Character { group: group.clone(), components: group.zero() }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn components(&self) -> &[i64] {
        &self.components
    }

    /// Every character of `g`, in the element order of the dual group.
    pub fn all(g: &FiniteAbelianGroup) -> Vec<Character> {
        dual_group(g).elements().map(|c| Character { group: g.clone(), components: c }).collect()
    }

    pub fn pairing(&self, s: &[i64]) -> Result<Phase> {
        pairing(self, s)
    }

    pub fn value(&self, s: &[i64]) -> Result<Complex<f64>> {
        Ok(self.pairing(s)?.to_complex())
    }

    /// Pointwise product, i.e. sum in the dual group.
    pub fn mul(&self, other: &Character) -> Result<Character> {
        if self.group != other.group {
            return invalid("multiplying characters of different groups");
        }
        Ok(Character { group: self.group.clone(), components: self.group.add(&self.components, &other.components) })
    }

    pub fn inverse(&self) -> Character {
        Character { group: self.group.clone(), components: self.group.neg(&self.components) }
    }

    /// `ω ∘ h` for a hom `h: K → G`.
    pub fn pull_back(&self, h: &GroupHom) -> Result<Character> {
        if h.codomain() != &self.group {
            return invalid("pull-back along a hom with the wrong codomain");
        }
        let dual = dual_hom(h)?;
        Ok(Character { group: h.domain().clone(), components: dual.apply(&self.components)? })
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ{:?}∈{}^", self.components, self.group)
    }
}

pub fn pairing(omega: &Character, s: &[i64]) -> Result<Phase> {
    let g = &omega.group;
    g.check(s)?;
    let e = g.exponent();
    let mut num = 0i64;
    for ((&c, &a), &m) in omega.components.iter().zip(s).zip(g.moduli()) {
        let term = ck_mul(ck_mul(c, a)? % e, e / m)? % e;
        num = ck_add(num, term)? % e;
    }
    Ok(Phase::new(num, e))
}

/// The canonical image of `s` in the double dual: the character of `Ĝ`
/// sending `ω` to `pairing(ω, s)`.
pub fn double_dual(g: &FiniteAbelianGroup, s: &[i64]) -> Result<Character> {
    g.check(s)?;
    Character::new(&dual_group(g), s)
}

/// The transpose `Ĥ → Ĝ` of `h: G → H`, `ω ↦ ω ∘ h`.
pub fn dual_hom(h: &GroupHom) -> Result<GroupHom> {
    let (dom, cod) = (h.domain(), h.codomain());
    let mut m = IntMatrix::zeros(dom.rank(), cod.rank());
    for i in 0..cod.rank() {
        for j in 0..dom.rank() {
            let v = ck_mul(h.matrix().get(i, j), dom.moduli()[j])? / cod.moduli()[i];
            m.set(j, i, v);
        }
    }
    GroupHom::new(dual_group(cod), dual_group(dom), m)
}
