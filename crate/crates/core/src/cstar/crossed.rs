use super::action::ActionDatum;
use super::algebra::{StructureTable, Summand};
use super::scalar::{CMat, CVec};
use crate::abelian::{Element, FiniteAbelianGroup};
use crate::Result;

/// The crossed product `A ⋊_α S` of a fiber algebra by a finite abelian
/// group. Basis element `(s, b)` is `δ_s ⊗ e_b`, listed with `s` major.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    action: ActionDatum,
    table: StructureTable,
}

impl CrossedProduct {
    pub fn new(action: &ActionDatum, tol: f64) -> Result<Self> {
        let g = action.group();
        let fiber = action.fiber();
        let da = fiber.dim();
        let order = g.order() as usize;
        let dim = order * da;
        let basis = fiber.basis();
        let elems: Vec<Element> = g.elements().collect();
        let place = |s: usize, coords: &CVec| {
            let mut v = CVec::zeros(dim);
            v.rows_mut(s * da, da).copy_from(coords);
            v
        };
        // moved[k][b] = α_{s_k}(e_b)
        let moved =
            (0..order).map(|k| basis.iter().map(|b| action.apply_at(k, b, tol)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let mut products = Vec::with_capacity(dim * dim);
        for (k, s) in elems.iter().enumerate() {
            for a in &basis {
                for t in &elems {
                    let st = g.index_of(&g.add(s, t));
                    for mb in &moved[k] {
                        products.push(place(st, &fiber.coords(&(a * mb), tol)?));
                    }
                }
            }
        }
        let mut adjoints = Vec::with_capacity(dim);
        for s in &elems {
            let ns = g.index_of(&g.neg(s));
            for a in &basis {
                let x = action.apply_at(ns, &a.adjoint(), tol)?;
                adjoints.push(place(ns, &fiber.coords(&x, tol)?));
            }
        }
        let unit = place(0, &fiber.coords(&fiber.identity(), tol)?);
        let table = StructureTable::new(dim, products, adjoints, unit)?;
        Ok(CrossedProduct { action: action.clone(), table })
    }

    pub fn action(&self) -> &ActionDatum {
        &self.action
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.action.group()
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    /// Index of `δ_s ⊗ e_b`.
    pub fn index(&self, s: &[i64], b: usize) -> usize {
        self.group().index_of(s) * self.action.fiber().dim() + b
    }

    /// Inverse of [`CrossedProduct::index`].
    pub fn label(&self, k: usize) -> (Element, usize) {
        let da = self.action.fiber().dim();
        (self.group().element_at(k / da), k % da)
    }

    /// Coordinates of `δ_s ⊗ a` for a realized fiber element `a`.
    pub fn delta(&self, s: &[i64], a: &CMat, tol: f64) -> Result<CVec> {
        let fiber = self.action.fiber();
        let mut v = CVec::zeros(self.dim());
        let k = self.group().index_of(s);
        v.rows_mut(k * fiber.dim(), fiber.dim()).copy_from(&fiber.coords(a, tol)?);
        Ok(v)
    }

    /// The regular covariant representation on `ℓ²(S) ⊗ C^N`:
    /// `(π(a)ξ)(r) = α_{−r}(a)ξ(r)`, `(U_sξ)(r) = ξ(r − s)`, with
    /// `δ_s ⊗ a ↦ π(a)U_s`. Returns the image of every basis element.
    pub fn regular_model(&self, tol: f64) -> Result<Vec<CMat>> {
        let g = self.group();
        let fiber = self.action.fiber();
        let n = fiber.size();
        let order = g.order() as usize;
        let mut out = Vec::with_capacity(self.dim());
        for s in g.elements() {
            for a in fiber.basis() {
                let mut m = CMat::zeros(order * n, order * n);
                for (ri, r) in g.elements().enumerate() {
                    let col = g.index_of(&g.sub(&r, &s));
                    let block = self.action.apply(&g.neg(&r), &a, tol)?;
                    m.view_mut((ri * n, col * n), (n, n)).copy_from(&block);
                }
                out.push(m);
            }
        }
        Ok(out)
    }

    pub fn center(&self, tol: f64) -> Result<Vec<CVec>> {
        self.table.center(tol)
    }

    pub fn wedderburn(&self, tol: f64) -> Result<Vec<Summand>> {
        self.table.wedderburn(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstar::action::Automorphism;
    use crate::cstar::algebra::{ConcreteAlgebra, FiberAlgebra};
    use crate::cstar::scalar::{approx_eq, one, zero};

    fn diag_sign() -> ActionDatum {
        let z = CMat::from_row_slice(2, 2, &[one(), zero(), zero(), -one()]);
        ActionDatum::from_generators(FiniteAbelianGroup::cyclic(2), FiberAlgebra::Matrix(2), vec![Automorphism::Conjugation(z)], 1e-9)
            .unwrap()
    }

    #[test]
    fn group_algebra_of_z2() {
        let a = ActionDatum::trivial(FiniteAbelianGroup::cyclic(2), FiberAlgebra::Matrix(1));
        let x = CrossedProduct::new(&a, 1e-9).unwrap();
        assert_eq!(x.dim(), 2);
        assert_eq!(x.center(1e-9).unwrap().len(), 2);
        let dims: Vec<usize> = x.wedderburn(1e-9).unwrap().iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![1, 1]);
    }

    #[test]
    fn diag_sign_center_and_summands() {
        let x = CrossedProduct::new(&diag_sign(), 1e-9).unwrap();
        assert_eq!(x.dim(), 8);
        assert!(x.table().check_axioms(1e-12).is_ok());
        assert_eq!(x.center(1e-9).unwrap().len(), 2);
        let dims: Vec<usize> = x.wedderburn(1e-9).unwrap().iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![2, 2]);
    }

    #[test]
    fn regular_model_realizes_structure_constants() {
        let x = CrossedProduct::new(&diag_sign(), 1e-9).unwrap();
        let model = x.regular_model(1e-9).unwrap();
        let concrete = ConcreteAlgebra::new(model.clone()).unwrap();
        for i in 0..x.dim() {
            for j in 0..x.dim() {
                let coords = concrete.coords(&(&model[i] * &model[j]), 1e-9).unwrap();
                assert!((coords - x.table().product(i, j)).norm() < 1e-12);
            }
            assert!(approx_eq(&model[i].adjoint(), &concrete.element(x.table().basis_adjoint(i)), 1e-12));
        }
        // the realized center agrees with the abstract one
        let s = concrete.structure(1e-9).unwrap();
        assert_eq!(s.center(1e-9).unwrap().len(), 2);
    }

    #[test]
    fn translation_on_functions_is_simple() {
        let a = ActionDatum::translation(&FiniteAbelianGroup::cyclic(3));
        let x = CrossedProduct::new(&a, 1e-9).unwrap();
        assert!(x.table().check_axioms(1e-12).is_ok());
        let w = x.wedderburn(1e-9).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].dim, 3);
    }
}
