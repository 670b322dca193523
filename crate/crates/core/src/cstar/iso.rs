use super::action::{ActionDatum, Automorphism, UnitaryActionDatum};
use super::algebra::{FiberAlgebra, StructureTable};
use super::crossed::CrossedProduct;
use super::linalg::rank;
use super::scalar::{approx_eq, is_unitary, CMat, CVec, PhaseComparator};
use crate::abelian::{Element, FiniteAbelianGroup};
use crate::error::invalid;
use crate::Result;

/// Outcome of checking a linear map between *-algebras on basis elements.
#[derive(Clone, Debug)]
pub struct IsoCheck {
    pub products_checked: usize,
    pub max_residual: f64,
    /// equality after snapping every coordinate to a root-of-unity
    /// multiple; `None` when some coordinate is not of that form
    pub exact: Option<bool>,
    pub failure: Option<IsoFailure>,
}

impl IsoCheck {
    pub fn holds(&self) -> bool {
        self.failure.is_none() && self.exact != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoFailure {
    Product(usize, usize),
    Adjoint(usize),
    NotBijective { rank: usize },
}

/// Verifies that `phi` (target coordinates of the images of the source
/// basis, one column each) is a *-isomorphism: products and adjoints of
/// basis elements, and invertibility.
pub fn verify_star_isomorphism(
    source: &StructureTable,
    target: &StructureTable,
    phi: &CMat,
    tol: f64,
    comparator: Option<PhaseComparator>,
) -> Result<IsoCheck> {
    if phi.shape() != (target.dim(), source.dim()) {
        return invalid("map has the wrong shape for these algebras");
    }
    let img = |i: usize| phi.column(i).into_owned();
    let mut max_residual: f64 = 0.0;
    let mut exact = comparator.map(|_| true);
    let mut failure = None;
    let mut compare = |lhs: &CVec, rhs: &CVec| -> bool {
        let r = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        max_residual = max_residual.max(r);
        if let (Some(cmp), Some(e)) = (comparator, exact) {
            let (a, b) = (CMat::from_column_slice(lhs.len(), 1, lhs.as_slice()), CMat::from_column_slice(rhs.len(), 1, rhs.as_slice()));
            exact = cmp.equal(&a, &b).map(|same| e && same);
        }
        r <= tol
    };
    let mut checked = 0;
    for i in 0..source.dim() {
        if !compare(&(phi * source.basis_adjoint(i)), &target.adjoint(&img(i))) && failure.is_none() {
            failure = Some(IsoFailure::Adjoint(i));
        }
        for j in 0..source.dim() {
            checked += 1;
            if !compare(&(phi * source.product(i, j)), &target.mul(&img(i), &img(j))) && failure.is_none() {
                failure = Some(IsoFailure::Product(i, j));
            }
        }
    }
    let r = rank(phi, tol.max(1e-7))?;
    if failure.is_none() && (r != source.dim() || r != target.dim()) {
        failure = Some(IsoFailure::NotBijective { rank: r });
    }
    Ok(IsoCheck { products_checked: checked, max_residual, exact, failure })
}

/// A verified isomorphism of crossed products, or of a crossed product with
/// a matrix algebra.
#[derive(Clone, Debug)]
pub struct CrossedIso {
    pub source: StructureTable,
    pub target: StructureTable,
    pub map: CMat,
    pub check: IsoCheck,
}

/// Checks the exterior-equivalence conditions `u_(s+t) = u_s α_s(u_t)` and
/// `β_s = Ad u_s ∘ α_s`; an error names the first failing pair.
pub fn check_exterior_equivalence(alpha: &ActionDatum, beta: &ActionDatum, u: &[CMat], tol: f64) -> Result<()> {
    let g = alpha.group();
    if beta.group() != g || beta.fiber() != alpha.fiber() {
        return invalid("actions of different groups or on different fibers");
    }
    let FiberAlgebra::Matrix(n) = alpha.fiber() else {
        return invalid("exterior equivalences are given by unitaries in matrix fibers");
    };
    if u.len() as u128 != g.order() {
        return invalid(format!("{} unitaries given for a group of order {}", u.len(), g.order()));
    }
    for (k, s) in g.elements().enumerate() {
        if u[k].shape() != (n, n) || !is_unitary(&u[k], tol) {
            return invalid(format!("u at s = {s:?} is not an {n}x{n} unitary"));
        }
    }
    for (k, s) in g.elements().enumerate() {
        for (l, t) in g.elements().enumerate() {
            let st = g.index_of(&g.add(&s, &t));
            if !approx_eq(&u[st], &(&u[k] * alpha.apply_at(k, &u[l], tol)?), tol) {
                return invalid(format!("cocycle condition fails at (s, t) = ({s:?}, {t:?})"));
            }
        }
        for (b, e) in alpha.fiber().basis().iter().enumerate() {
            let lhs = beta.apply_at(k, e, tol)?;
            let rhs = &u[k] * alpha.apply_at(k, e, tol)? * u[k].adjoint();
            if !approx_eq(&lhs, &rhs, tol) {
                return invalid(format!("β_s ≠ Ad u_s ∘ α_s at (s, basis element) = ({s:?}, {b})"));
            }
        }
    }
    Ok(())
}

/// `δ_s ⊗ a ↦ δ_s ⊗ a·u_s*` from `A ⋊_α S` to `A ⋊_β S`.
pub fn exterior_equivalence_iso(alpha: &ActionDatum, beta: &ActionDatum, u: &[CMat], tol: f64) -> Result<CrossedIso> {
    check_exterior_equivalence(alpha, beta, u, tol)?;
    let src = CrossedProduct::new(alpha, tol)?;
    let tgt = CrossedProduct::new(beta, tol)?;
    let fiber = alpha.fiber();
    let mut cols = Vec::with_capacity(src.dim());
    for (k, s) in alpha.group().elements().enumerate() {
        for a in fiber.basis() {
            cols.push(tgt.delta(&s, &(a * u[k].adjoint()), tol)?);
        }
    }
    let map = CMat::from_columns(&cols);
    let cmp = PhaseComparator::new(alpha.group().exponent());
    let check = verify_star_isomorphism(src.table(), tgt.table(), &map, tol, Some(cmp))?;
    Ok(CrossedIso { source: src.table().clone(), target: tgt.table().clone(), map, check })
}

/// `C*(S) ⊗ A → A ⋊_{Ad u} S`, `δ_s ⊗ a ↦ δ_s ⊗ a·u_s*`. The source is the
/// crossed product by the trivial action, which has the same basis.
pub fn unitary_tensor_iso(u: &UnitaryActionDatum, tol: f64) -> Result<CrossedIso> {
    let trivial = ActionDatum::trivial(u.group().clone(), FiberAlgebra::Matrix(u.size()));
    exterior_equivalence_iso(&trivial, &u.action(tol)?, u.unitaries(), tol)
}

/// `FUNCTIONS(H) ⋊_lt H ≅ M_|H|` by `δ_s ⊗ e_x ↦ E_{x, x−s}`.
pub fn stone_von_neumann(h: &FiniteAbelianGroup, tol: f64) -> Result<CrossedIso> {
    let table: Vec<Vec<usize>> = h.elements().map(|s| h.elements().map(|x| h.index_of(&h.add(&x, &s))).collect()).collect();
    stone_von_neumann_torsor(h, &table, tol)
}

/// `FUNCTIONS(X) ⋊ S ≅ M_|X|` for a free transitive action, with
/// `perms[k][x]` the image of `x` under the `k`-th element:
/// `δ_s ⊗ e_x ↦ E_{x, (−s)·x}`.
pub fn stone_von_neumann_torsor(s: &FiniteAbelianGroup, perms: &[Vec<usize>], tol: f64) -> Result<CrossedIso> {
    let n = perms.first().map_or(0, Vec::len);
    if n as u128 != s.order() {
        return invalid("the acting group must act simply transitively");
    }
    for x in 0..n {
        let mut orbit: Vec<usize> = perms.iter().map(|p| p[x]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        if orbit.len() != n {
            return invalid("the acting group must act simply transitively");
        }
    }
    let alpha =
        ActionDatum::new(s.clone(), FiberAlgebra::Functions(n), perms.iter().cloned().map(Automorphism::Permutation).collect(), tol)?;
    let src = CrossedProduct::new(&alpha, tol)?;
    let tgt = FiberAlgebra::Matrix(n).concrete().structure(tol)?;
    let mut map = CMat::zeros(n * n, src.dim());
    let elems: Vec<Element> = s.elements().collect();
    for (k, g) in elems.iter().enumerate() {
        let neg = s.index_of(&s.neg(g));
        for x in 0..n {
            map[(x * n + perms[neg][x], k * n + x)] = super::scalar::one();
        }
    }
    let check = verify_star_isomorphism(src.table(), &tgt, &map, tol, Some(PhaseComparator::new(s.exponent())))?;
    Ok(CrossedIso { source: src.table().clone(), target: tgt, map, check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Character;
    use crate::cstar::action::{is_unitary_action, UnitaryOutcome};
    use crate::cstar::scalar::{one, root_of_unity, zero};

    fn sign() -> CMat {
        CMat::from_row_slice(2, 2, &[one(), zero(), zero(), -one()])
    }

    #[test]
    fn trivial_unitaries_give_the_identity_map() {
        let u = UnitaryActionDatum::trivial(FiniteAbelianGroup::cyclic(2), 2);
        let iso = unitary_tensor_iso(&u, 1e-9).unwrap();
        assert!(iso.check.holds());
        assert!(approx_eq(&iso.map, &CMat::identity(8, 8), 0.0));
    }

    #[test]
    fn diag_sign_tensor_iso() {
        let u = UnitaryActionDatum::from_generators(FiniteAbelianGroup::cyclic(2), vec![sign()], 1e-9).unwrap();
        let iso = unitary_tensor_iso(&u, 1e-9).unwrap();
        assert!(iso.check.holds());
        assert_eq!(iso.check.exact, Some(true));
        assert_eq!(iso.check.products_checked, 64);
        // unit to unit
        assert!((&iso.map * iso.source.unit() - iso.target.unit()).norm() < 1e-12);
        let dims = |t: &StructureTable| t.wedderburn(1e-9).unwrap().iter().map(|s| s.dim).collect::<Vec<_>>();
        assert_eq!(dims(&iso.source), vec![2, 2]);
        assert_eq!(dims(&iso.target), vec![2, 2]);
    }

    #[test]
    fn character_twist_on_group_algebra() {
        let g = FiniteAbelianGroup::cyclic(3);
        let alpha = ActionDatum::trivial(g.clone(), FiberAlgebra::Matrix(1));
        let chi = Character::new(&g, &[1]).unwrap();
        let u: Vec<CMat> = g.elements().map(|s| CMat::from_element(1, 1, chi.value(&s).unwrap())).collect();
        let iso = exterior_equivalence_iso(&alpha, &alpha, &u, 1e-9).unwrap();
        assert!(iso.check.holds());
        assert!((iso.map[(1, 1)] - root_of_unity(-1, 3)).norm() < 1e-12);
    }

    #[test]
    fn unitary_action_is_exterior_equivalent_to_trivial() {
        let g = FiniteAbelianGroup::cyclic(2);
        let alpha =
            ActionDatum::from_generators(g.clone(), FiberAlgebra::Matrix(2), vec![Automorphism::Conjugation(sign())], 1e-9).unwrap();
        let UnitaryOutcome::Lift(u) = is_unitary_action(&alpha, 1e-9).unwrap() else { panic!() };
        let w: Vec<CMat> = u.unitaries().iter().map(|m| m.adjoint()).collect();
        let trivial = ActionDatum::trivial(g, FiberAlgebra::Matrix(2));
        assert!(exterior_equivalence_iso(&alpha, &trivial, &w, 1e-9).unwrap().check.holds());
    }

    #[test]
    fn broken_cocycle_names_pair() {
        let g = FiniteAbelianGroup::cyclic(2);
        let alpha = ActionDatum::trivial(g, FiberAlgebra::Matrix(1));
        let u = vec![CMat::identity(1, 1), CMat::from_element(1, 1, root_of_unity(1, 4))];
        let err = exterior_equivalence_iso(&alpha, &alpha, &u, 1e-9).unwrap_err();
        assert!(err.to_string().contains("([1], [1])"), "{err}");
    }

    #[test]
    fn stone_von_neumann_small_groups() {
        for moduli in [vec![], vec![2], vec![3], vec![2, 2]] {
            let h = FiniteAbelianGroup::new(&moduli).unwrap();
            let iso = stone_von_neumann(&h, 1e-9).unwrap();
            assert!(iso.check.holds(), "{moduli:?}");
            assert_eq!(iso.check.exact, Some(true));
            assert_eq!(iso.source.center(1e-9).unwrap().len(), 1);
        }
    }

    #[test]
    fn wrong_map_is_caught() {
        let h = FiniteAbelianGroup::cyclic(2);
        let mut iso = stone_von_neumann(&h, 1e-9).unwrap();
        iso.map.swap_columns(0, 1);
        let check = verify_star_isomorphism(&iso.source, &iso.target, &iso.map, 1e-9, None).unwrap();
        assert!(!check.holds());
        assert!(matches!(check.failure, Some(IsoFailure::Adjoint(_) | IsoFailure::Product(_, _))));
    }
}
