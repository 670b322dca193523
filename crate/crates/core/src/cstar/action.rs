use super::algebra::FiberAlgebra;
use super::linalg::{nullspace, unvectorize};
use super::scalar::{approx_eq, c, is_unitary, CMat, CVec};
use crate::abelian::{Element, FiniteAbelianGroup, Phase};
use crate::error::invalid;
use crate::{Error, Result};

/// One automorphism of a fiber algebra.
#[derive(Clone, Debug)]
pub enum Automorphism {
    /// `a ↦ V a V*` for a unitary `V` (matrix fibers)
    Conjugation(CMat),
    /// a linear map on basis coordinates, `dim × dim`
    Linear(CMat),
    /// `e_x ↦ e_{p(x)}` on a function algebra
    Permutation(Vec<usize>),
}

/// An action of a finite abelian group on a fiber algebra, stored as one
/// coordinate map per group element (in element order).
#[derive(Clone, Debug)]
pub struct ActionDatum {
    group: FiniteAbelianGroup,
    fiber: FiberAlgebra,
    maps: Vec<CMat>,
}

impl ActionDatum {
    /// One automorphism per group element, in element order.
    pub fn new(group: FiniteAbelianGroup, fiber: FiberAlgebra, autos: Vec<Automorphism>, tol: f64) -> Result<Self> {
        if autos.len() as u128 != group.order() {
            return invalid(format!("{} automorphisms given for a group of order {}", autos.len(), group.order()));
        }
        let maps = autos.iter().map(|a| linear_map(fiber, a, tol)).collect::<Result<Vec<_>>>()?;
        let d = ActionDatum { group, fiber, maps };
        d.validate(tol, autos.iter().any(|a| matches!(a, Automorphism::Linear(_))))?;
        Ok(d)
    }

    /// One automorphism per generator of the group; element
    /// `Σ aᵢgᵢ` acts by the composite of generator powers.
    pub fn from_generators(group: FiniteAbelianGroup, fiber: FiberAlgebra, gens: Vec<Automorphism>, tol: f64) -> Result<Self> {
        if gens.len() != group.rank() {
            return invalid(format!("{} generator automorphisms given for a group of rank {}", gens.len(), group.rank()));
        }
        let gm = gens.iter().map(|a| linear_map(fiber, a, tol)).collect::<Result<Vec<_>>>()?;
        let maps = group.elements().map(|s| power_product(&gm, &s, fiber.dim())).collect();
        let d = ActionDatum { group, fiber, maps };
        d.validate(tol, gens.iter().any(|a| matches!(a, Automorphism::Linear(_))))?;
        Ok(d)
    }

    pub fn trivial(group: FiniteAbelianGroup, fiber: FiberAlgebra) -> Self {
        let n = group.order() as usize;
        ActionDatum { group, fiber, maps: vec![CMat::identity(fiber.dim(), fiber.dim()); n] }
    }

    /// Translation of `H` on functions on `H`: `e_x ↦ e_{x+s}`.
    pub fn translation(group: &FiniteAbelianGroup) -> Self {
        let perms = group
            .elements()
            .map(|s| Automorphism::Permutation(group.elements().map(|x| group.index_of(&group.add(&x, &s))).collect()))
            .collect();
        Self::new(group.clone(), FiberAlgebra::Functions(group.order() as usize), perms, 1e-12).expect("translation is an action")
    }

    /// A permutation action: `perms[k]` is the permutation of the `k`-th
    /// group element.
    pub fn permutation(group: &FiniteAbelianGroup, perms: Vec<Vec<usize>>, tol: f64) -> Result<Self> {
        let m = perms.first().map_or(0, Vec::len);
        let autos = perms.into_iter().map(Automorphism::Permutation).collect();
        Self::new(group.clone(), FiberAlgebra::Functions(m), autos, tol)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn fiber(&self) -> FiberAlgebra {
        self.fiber
    }

    /// The coordinate map of `α_s`.
    pub fn map(&self, s: &[i64]) -> &CMat {
        &self.maps[self.group.index_of(s)]
    }

    pub fn map_at(&self, k: usize) -> &CMat {
        &self.maps[k]
    }

    pub fn apply(&self, s: &[i64], a: &CMat, tol: f64) -> Result<CMat> {
        let x = self.fiber.coords(a, tol)?;
        Ok(self.fiber.element(&(self.map(s) * x)))
    }

    pub fn apply_at(&self, k: usize, a: &CMat, tol: f64) -> Result<CMat> {
        let x = self.fiber.coords(a, tol)?;
        Ok(self.fiber.element(&(&self.maps[k] * x)))
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        let id = CMat::identity(self.fiber.dim(), self.fiber.dim());
        self.maps.iter().all(|m| approx_eq(m, &id, tol))
    }

    pub fn approx_eq(&self, other: &ActionDatum, tol: f64) -> bool {
        self.group == other.group && self.fiber == other.fiber && self.maps.iter().zip(&other.maps).all(|(a, b)| approx_eq(a, b, tol))
    }

    /// Group law always; multiplicativity and adjoints only when some map
    /// was given as a bare linear map (conjugations and permutations are
    /// automorphisms by construction).
    fn validate(&self, tol: f64, check_automorphisms: bool) -> Result<()> {
        let g = &self.group;
        let id = CMat::identity(self.fiber.dim(), self.fiber.dim());
        if !approx_eq(&self.maps[0], &id, tol) {
            return invalid("the identity element does not act trivially");
        }
        let basis = self.fiber.basis();
        for (k, s) in g.elements().enumerate() {
            for (l, t) in g.elements().enumerate() {
                let st = g.index_of(&g.add(&s, &t));
                if !approx_eq(&self.maps[st], &(&self.maps[k] * &self.maps[l]), tol) {
                    return invalid(format!("α_(s+t) ≠ α_s∘α_t for s = {s:?}, t = {t:?}"));
                }
            }
            if !check_automorphisms {
                continue;
            }
            for (i, a) in basis.iter().enumerate() {
                let fa = self.apply_at(k, a, tol)?;
                if !approx_eq(&self.apply_at(k, &a.adjoint(), tol)?, &fa.adjoint(), tol) {
                    return invalid(format!("α_{s:?} does not preserve adjoints on basis element {i}"));
                }
                for (j, b) in basis.iter().enumerate() {
                    let lhs = self.apply_at(k, &(a * b), tol)?;
                    if !approx_eq(&lhs, &(&fa * self.apply_at(k, b, tol)?), tol) {
                        return invalid(format!("α_{s:?} is not multiplicative on basis elements {i}, {j}"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn linear_map(fiber: FiberAlgebra, a: &Automorphism, tol: f64) -> Result<CMat> {
    let d = fiber.dim();
    match a {
        Automorphism::Linear(m) => {
            if m.shape() != (d, d) {
                return invalid(format!("linear automorphism must be {d}x{d}"));
            }
            Ok(m.clone())
        }
        Automorphism::Conjugation(v) => {
            let n = fiber.size();
            if !matches!(fiber, FiberAlgebra::Matrix(_)) {
                return invalid("conjugation automorphisms need a matrix fiber");
            }
            if v.shape() != (n, n) || !is_unitary(v, tol) {
                return invalid(format!("conjugating matrix must be a {n}x{n} unitary"));
            }
            let cols: Vec<CVec> = fiber.basis().iter().map(|b| fiber.coords(&(v * b * v.adjoint()), tol)).collect::<Result<_>>()?;
            Ok(CMat::from_columns(&cols))
        }
        Automorphism::Permutation(p) => {
            if !matches!(fiber, FiberAlgebra::Functions(_)) {
                return invalid("permutation automorphisms need a function fiber");
            }
            let mut seen = vec![false; d];
            if p.len() != d || p.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
                return invalid(format!("{p:?} is not a permutation of {d} points"));
            }
            let mut m = CMat::zeros(d, d);
            for (x, &y) in p.iter().enumerate() {
                m[(y, x)] = c(1.0, 0.0);
            }
            Ok(m)
        }
    }
}

fn power_product(gens: &[CMat], s: &[i64], n: usize) -> CMat {
    let mut m = CMat::identity(n, n);
    for (g, &a) in gens.iter().zip(s) {
        for _ in 0..a {
            m = &m * g;
        }
    }
    m
}

/// A family of unitaries `u_s` in a matrix fiber with `u_0 = 1` and
/// `u_(s+t) = u_s u_t`.
#[derive(Clone, Debug)]
pub struct UnitaryActionDatum {
    group: FiniteAbelianGroup,
    n: usize,
    unitaries: Vec<CMat>,
}

impl UnitaryActionDatum {
    /// One unitary per group element, in element order.
    pub fn new(group: FiniteAbelianGroup, unitaries: Vec<CMat>, tol: f64) -> Result<Self> {
        if unitaries.len() as u128 != group.order() {
            return invalid(format!("{} unitaries given for a group of order {}", unitaries.len(), group.order()));
        }
        let n = unitaries[0].nrows();
        for (k, u) in unitaries.iter().enumerate() {
            if u.shape() != (n, n) || !is_unitary(u, tol) {
                return invalid(format!("u for element {:?} is not an {n}x{n} unitary", group.element_at(k)));
            }
        }
        if !approx_eq(&unitaries[0], &CMat::identity(n, n), tol) {
            return invalid("u_0 is not the identity");
        }
        for (k, s) in group.elements().enumerate() {
            for (l, t) in group.elements().enumerate() {
                let st = group.index_of(&group.add(&s, &t));
                if !approx_eq(&unitaries[st], &(&unitaries[k] * &unitaries[l]), tol) {
                    return invalid(format!("u_(s+t) ≠ u_s u_t for s = {s:?}, t = {t:?}"));
                }
            }
        }
        Ok(UnitaryActionDatum { group, n, unitaries })
    }

    /// One unitary per generator; the rest are products of powers.
    pub fn from_generators(group: FiniteAbelianGroup, gens: Vec<CMat>, tol: f64) -> Result<Self> {
        if gens.len() != group.rank() {
            return invalid(format!("{} generator unitaries given for a group of rank {}", gens.len(), group.rank()));
        }
        let n = match gens.first() {
            Some(g) => g.nrows(),
            None => return Self::new(group, vec![CMat::identity(1, 1)], tol),
        };
        if gens.iter().any(|g| g.shape() != (n, n)) {
            return invalid("generator unitaries must share one size");
        }
        let all = group.elements().map(|s| power_product(&gens, &s, n)).collect();
        Self::new(group, all, tol)
    }

    pub fn trivial(group: FiniteAbelianGroup, n: usize) -> Self {
        let k = group.order() as usize;
        UnitaryActionDatum { group, n, unitaries: vec![CMat::identity(n, n); k] }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn unitary(&self, s: &[i64]) -> &CMat {
        &self.unitaries[self.group.index_of(s)]
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    /// The action `Ad u` on `M_n`.
    pub fn action(&self, tol: f64) -> Result<ActionDatum> {
        let autos = self.unitaries.iter().cloned().map(Automorphism::Conjugation).collect();
        ActionDatum::new(self.group.clone(), FiberAlgebra::Matrix(self.n), autos, tol)
    }

    /// Whether `Ad u_s = α_s` for every `s`.
    pub fn implements(&self, alpha: &ActionDatum, tol: f64) -> Result<bool> {
        if alpha.group() != &self.group || alpha.fiber() != FiberAlgebra::Matrix(self.n) {
            return Ok(false);
        }
        for (k, u) in self.unitaries.iter().enumerate() {
            if !approx_eq(&linear_map(alpha.fiber(), &Automorphism::Conjugation(u.clone()), tol)?, alpha.map_at(k), tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Classification of an action by whether it lifts to a unitary action.
#[derive(Clone, Debug)]
pub enum UnitaryOutcome {
    Lift(UnitaryActionDatum),
    /// commutator phases `c(s, t) = tr(V_s V_t V_s* V_t*)/n`, listed where
    /// nontrivial, for pairs of group elements `s < t`
    Obstructed(Vec<(Element, Element, Phase)>),
    NotPointwiseInner,
}

/// The unitary implementing `α_s`, normalized so that its first nonzero
/// entry (row by row) is real and positive.
pub fn implementing_unitary(alpha: &ActionDatum, s: &[i64], tol: f64) -> Result<Option<CMat>> {
    let n = match alpha.fiber() {
        FiberAlgebra::Matrix(n) => n,
        FiberAlgebra::Functions(_) => return invalid("implementing unitaries are sought in matrix fibers"),
    };
    let fiber = alpha.fiber();
    // α_s(E_kl)·V − V·E_kl = 0, unknown vec(V)
    let mut sys = CMat::zeros(n * n * n * n, n * n);
    let id = CMat::identity(n, n);
    for (k, e) in fiber.basis().iter().enumerate() {
        let ae = alpha.apply(s, e, tol)?;
        let block = id.kronecker(&ae) - e.transpose().kronecker(&id);
        sys.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    let ns = nullspace(&sys, tol)?;
    let Some(v) = ns.first() else { return Ok(None) };
    let v = unvectorize(v, n, n);
    let vv = v.adjoint() * &v;
    let scale = vv[(0, 0)].re;
    if scale <= tol || !approx_eq(&vv, &(CMat::identity(n, n) * c(scale, 0.0)), tol.max(1e-7) * scale) {
        return Ok(None);
    }
    let mut v = v / c(scale.sqrt(), 0.0);
    let lead = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| v[ij]).find(|z| z.norm() > 1e-6);
    if let Some(z) = lead {
        v *= z.conj() / c(z.norm(), 0.0);
    }
    Ok(Some(v))
}

pub fn is_unitary_action(alpha: &ActionDatum, tol: f64) -> Result<UnitaryOutcome> {
    let g = alpha.group().clone();
    let n = match alpha.fiber() {
        FiberAlgebra::Functions(m) => {
            return Ok(if alpha.is_trivial(tol) {
                UnitaryOutcome::Lift(UnitaryActionDatum::trivial(g, m))
            } else {
                UnitaryOutcome::NotPointwiseInner
            })
        }
        FiberAlgebra::Matrix(n) => n,
    };
    let mut vs = Vec::new();
    for s in g.elements() {
        match implementing_unitary(alpha, &s, tol)? {
            Some(v) => vs.push(v),
            None => return Ok(UnitaryOutcome::NotPointwiseInner),
        }
    }
    let e = g.exponent();
    let mut obstructions = Vec::new();
    for (k, s) in g.elements().enumerate() {
        for (l, t) in g.elements().enumerate().skip(k + 1) {
            let comm = &vs[k] * &vs[l] * vs[k].adjoint() * vs[l].adjoint();
            let ph = comm.trace() / c(n as f64, 0.0);
            let p = Phase::snap(ph, e, tol.max(1e-7)).ok_or_else(|| Error::NumericalFailure {
                message: format!("commutator phase of {s:?}, {t:?} is not an {e}-th root of unity"),
                condition: ph.norm(),
            })?;
            if !p.is_zero() {
                obstructions.push((s.clone(), t.clone(), p));
            }
        }
    }
    if !obstructions.is_empty() {
        return Ok(UnitaryOutcome::Obstructed(obstructions));
    }
    // rescale each generator so that its order-th power is the identity
    let mut gens = Vec::new();
    for (i, &m) in g.moduli().iter().enumerate() {
        let v = &vs[g.index_of(&g.generator(i))];
        let mut p = CMat::identity(n, n);
        for _ in 0..m {
            p = &p * v;
        }
        let lambda = p[(0, 0)];
        let root = nalgebra::Complex::from_polar(1.0, -lambda.arg() / m as f64);
        gens.push(v * root);
    }
    let lift = UnitaryActionDatum::from_generators(g, gens, tol.max(1e-7))?;
    if !lift.implements(alpha, tol.max(1e-7))? {
        return Err(Error::InternalInconsistency("rescaled unitaries no longer implement the action".into()));
    }
    Ok(UnitaryOutcome::Lift(lift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::scalar::{one, zero};

    pub(crate) fn pauli() -> (CMat, CMat) {
        let x = CMat::from_row_slice(2, 2, &[zero(), one(), one(), zero()]);
        let z = CMat::from_row_slice(2, 2, &[one(), zero(), zero(), -one()]);
        (x, z)
    }

    #[test]
    fn diagonal_sign_lifts() {
        let (_, z) = pauli();
        let g = FiniteAbelianGroup::cyclic(2);
        let a = ActionDatum::from_generators(g, FiberAlgebra::Matrix(2), vec![Automorphism::Conjugation(z.clone())], 1e-9).unwrap();
        match is_unitary_action(&a, 1e-9).unwrap() {
            UnitaryOutcome::Lift(u) => assert!(approx_eq(u.unitary(&[1]), &z, 1e-12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pauli_is_obstructed() {
        let (x, z) = pauli();
        let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let a = ActionDatum::from_generators(
            g,
            FiberAlgebra::Matrix(2),
            vec![Automorphism::Conjugation(x), Automorphism::Conjugation(z)],
            1e-9,
        )
        .unwrap();
        match is_unitary_action(&a, 1e-9).unwrap() {
            UnitaryOutcome::Obstructed(t) => assert!(t.contains(&(vec![0, 1], vec![1, 0], Phase::new(1, 2)))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn translation_is_not_inner() {
        let a = ActionDatum::translation(&FiniteAbelianGroup::cyclic(2));
        assert!(matches!(is_unitary_action(&a, 1e-9).unwrap(), UnitaryOutcome::NotPointwiseInner));
    }

    #[test]
    fn order_three_phase_is_rescaled() {
        // V = ζ₉·diag(1, ζ₃) has V³ = ζ₃·1; the lift must cube to 1
        let z3 = FiniteAbelianGroup::cyclic(3);
        let zeta = crate::cstar::scalar::root_of_unity(1, 3);
        let v = CMat::from_diagonal(&CVec::from_vec(vec![one(), zeta])) * crate::cstar::scalar::root_of_unity(1, 9);
        let a = ActionDatum::from_generators(z3, FiberAlgebra::Matrix(2), vec![Automorphism::Conjugation(v)], 1e-9).unwrap();
        let UnitaryOutcome::Lift(u) = is_unitary_action(&a, 1e-9).unwrap() else { panic!() };
        let g = u.unitary(&[1]);
        assert!(approx_eq(&(g * g * g), &CMat::identity(2, 2), 1e-9));
    }

    #[test]
    fn invalid_actions_rejected() {
        let g = FiniteAbelianGroup::cyclic(2);
        // not an involution
        let p = CMat::from_diagonal(&CVec::from_vec(vec![one(), c(0.0, 1.0)]));
        assert!(ActionDatum::from_generators(g.clone(), FiberAlgebra::Matrix(2), vec![Automorphism::Conjugation(p)], 1e-9).is_err());
        // a linear map that is not multiplicative
        let l = CMat::identity(2, 2) * c(2.0, 0.0);
        assert!(ActionDatum::from_generators(g, FiberAlgebra::Functions(2), vec![Automorphism::Linear(l)], 1e-9).is_err());
    }
}
